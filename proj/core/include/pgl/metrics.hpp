#pragma once

#include <set>
#include <utility>
#include <vector>

#include "pgl/laplacian.hpp"
#include "pgl/spectral.hpp"

namespace pgl {

using Edge = std::pair<Index, Index>;  // (i, j) with i < j
using EdgeSet = std::set<Edge>;

// Edge (i, j) is present when -L_ij > tol.
EdgeSet edges_of(const MatrixXd& L, double tol = 1e-4);

struct EdgeCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

EdgeCounts compare_edges(const EdgeSet& truth, const EdgeSet& estimate);

// 2 tp / (2 tp + fn + fp); 1 when both sets are empty.
double f_score(const EdgeSet& truth, const EdgeSet& estimate);
double f_score(const MatrixXd& L_true, const MatrixXd& L_est, double tol = 1e-4);

// I(a; b) / (0.5 (H(a) + H(b))) with natural logarithms; 1 when both are single-cluster.
double nmi(const std::vector<int>& a, const std::vector<int>& b);
double nmi(const ClusterLabels& a, const ClusterLabels& b);

struct IterateError {
  double value = 0.0;
  // A previous iterate had zero norm; value is +inf.
  bool degenerate = false;
};

// sum_i ||current_i - previous_i||_F^2 / ||previous_i||_F^2.
IterateError iterate_error(const std::vector<MatrixXd>& current,
                           const std::vector<MatrixXd>& previous);

// (1 / T) sum_t ||mask_t ⊙ (X_t - Xhat_t)||_F^2.
double imputation_error(const MultiDomainData& truth, const MultiDomainData& estimate,
                        const std::vector<Eigen::ArrayXXd>& mask);

}  // namespace pgl
