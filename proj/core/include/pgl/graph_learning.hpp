#pragma once

#include <vector>

#include "pgl/laplacian.hpp"
#include "pgl/qp_solver.hpp"
#include "pgl/spectral.hpp"

namespace pgl {

struct CovariancePair {
  MatrixXd S_P;  // sum_t X_t X_t^T
  MatrixXd S_Q;  // sum_t X_t^T X_t
};

enum class CovarianceScaling {
  kSum,           // raw sums over snapshots
  kUnitDiagonal,  // each matrix rescaled to trace n, so the mean diagonal is 1
};

CovariancePair sample_covariances(const MultiDomainData& data);
MatrixXd scale_covariance(const MatrixXd& S, CovarianceScaling scaling);
CovariancePair scale_covariances(const CovariancePair& S, CovarianceScaling scaling);

// Equality constraints of a factor: the trace row vec(I)^T D followed by the
// null-space rows (1^T ⊗ I) D, with d = (n, 0, ..., 0). The trace row is
// omitted when with_trace is false.
RowSparseMatrix laplacian_constraints(Index n, bool with_trace = true);
VectorXd laplacian_constraint_rhs(Index n, bool with_trace = true);

// Factor QP: p = 2 beta diag(D^T D), q = D^T vec(S).
DiagQpProblem assemble_pgl_factor(const MatrixXd& S, double beta);

// Objective tr(L S) + beta ||L||_F^2 of a single factor.
double pgl_factor_objective(const MatrixXd& L, const MatrixXd& S, double beta);

struct PglConfig {
  double beta1 = 0.2;
  double beta2 = 0.3;
  SolverConfig solver = {};
  CovarianceScaling scaling = CovarianceScaling::kUnitDiagonal;

  void validate() const;
};

struct FactorSolve {
  GraphLaplacian L;
  QpSolution solution;
};

struct PglResult {
  GraphLaplacian L_P;
  GraphLaplacian L_Q;
  QpSolution solution_P;
  QpSolution solution_Q;
  double objective = 0.0;

  bool converged() const { return solution_P.converged() && solution_Q.converged(); }
};

// Learns both factors from already scaled covariances.
PglResult learn_product_graph(const CovariancePair& S, const PglConfig& config);
PglResult learn_product_graph(const MultiDomainData& data, const PglConfig& config);

// Classical single-graph baseline on an N x N covariance.
FactorSolve learn_single_graph(const MatrixXd& S, double beta, const SolverConfig& solver = {});

// Stacked problem over l = [l_P; l_Q] with block-diagonal constraints. Used to
// check separability against the per-factor solves.
DiagQpProblem assemble_stacked_pgl(const CovariancePair& S, double beta1, double beta2);

struct RpglConfig {
  PglConfig pgl = {};
  double gamma1 = 0.5;
  double gamma2 = 0.7;
  Index K_P = 1;
  Index K_Q = 1;
  int max_outer = 100;
  double outer_tol = 1e-6;

  void validate() const;
};

struct AlternationTrace {
  std::vector<double> error;      // relative change of both factors per outer step
  std::vector<double> objective;  // full objective after each outer step
  int outer_iterations = 0;
  bool converged = false;
  bool inner_converged = true;  // every inner QP reached its tolerance
};

struct RpglResult {
  GraphLaplacian L_P;
  GraphLaplacian L_Q;
  EmbeddingPair embedding;
  AlternationTrace trace;
  ComponentReport components_P;
  ComponentReport components_Q;
};

// PGL objective plus gamma1 ||V_P||^2_{L_P} + gamma2 ||V_Q||^2_{L_Q}.
double rpgl_objective(const GraphLaplacian& L_P, const GraphLaplacian& L_Q,
                      const EmbeddingPair& V, const CovariancePair& S, const RpglConfig& config);

RpglResult learn_rank_constrained(const MultiDomainData& data, const RpglConfig& config);
RpglResult learn_rank_constrained(const CovariancePair& S, const RpglConfig& config);

}  // namespace pgl
