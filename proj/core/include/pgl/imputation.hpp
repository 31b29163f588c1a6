#pragma once

#include <vector>

#include "pgl/graph_learning.hpp"
#include "pgl/laplacian.hpp"
#include "pgl/synth.hpp"

namespace pgl {

struct ImputeConfig {
  double alpha1 = 0.01;
  double alpha2 = 0.01;
  double alpha3 = 1e-6;
  // Graph updates minimize alpha_i tr(L S) + beta_i ||L||_F^2 on raw sums; the
  // scaling field is ignored here.
  PglConfig pgl = {2.0, 2.0, {}, CovarianceScaling::kSum};
  double outer_tol = 1e-3;
  int max_outer = 50;

  void validate() const;
};

// Per snapshot: x = [A + (alpha1 L_P ⊕ alpha2 L_Q) + alpha3 I]^{-1} A y, with A = diag(vec(mask)).
// Throws SingularSystemError when alpha3 = 0 and a product-graph component has no observed entry.
MultiDomainData impute_step(const MultiDomainData& observed, const std::vector<Mask>& train,
                            const GraphLaplacian& L_P, const GraphLaplacian& L_Q,
                            double alpha1, double alpha2, double alpha3);
MultiDomainData impute_step(const MultiDomainData& observed, const std::vector<Mask>& train,
                            const GraphLaplacian& L_P, const GraphLaplacian& L_Q,
                            const ImputeConfig& config);

// beta1 ||L_P||^2 + beta2 ||L_Q||^2 + sum_t ||A_t (X_t - Y_t)||^2 + alpha3 ||X_t||^2
//   + alpha1 tr(X_t^T L_P X_t) + alpha2 tr(X_t L_Q X_t^T)
double joint_objective(const MultiDomainData& X, const MultiDomainData& observed,
                       const std::vector<Mask>& train, const GraphLaplacian& L_P,
                       const GraphLaplacian& L_Q, const ImputeConfig& config);

// Graph step of the alternation for fixed signals.
PglResult update_graphs(const MultiDomainData& X, const ImputeConfig& config);

struct ImputeResult {
  MultiDomainData imputed;
  GraphLaplacian L_P;
  GraphLaplacian L_Q;
  std::vector<double> error;      // iterate error of the graph pair per outer step
  std::vector<double> objective;  // entry 0 is the initial point
  int outer_iterations = 0;
  bool converged = false;
  bool inner_converged = true;
};

// Starts from PGL graphs on the zero-filled observations, then alternates a
// signal step and a graph step until the iterate error drops below outer_tol.
ImputeResult joint_impute_learn(const MultiDomainData& observed, const std::vector<Mask>& train,
                                const ImputeConfig& config);

// Gaussian-kernel k-nearest-neighbour graph over the rows of features,
// symmetrized by max and rescaled to trace n. The bandwidth is the mean
// squared distance to the k-th neighbour.
GraphLaplacian knn_graph(const MatrixXd& features, int k);

struct FactorGraphs {
  GraphLaplacian L_P;
  GraphLaplacian L_Q;
};

// kNN graphs on the factor nodes using the zero-filled observations as features.
FactorGraphs knn_factor_graphs(const MultiDomainData& observed, int k);

}  // namespace pgl
