#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace pgl {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct ValidationTolerances {
  double symmetry = 1e-12;
  double row_sum = 1e-9;
  double psd_floor = -1e-8;
};

// Half-vectorization of an n x n symmetric matrix: lower triangle, column-major.
constexpr Index vech_size(Index n) { return n * (n + 1) / 2; }

// Position of entry (i, j), i >= j, inside vech.
constexpr Index vech_index(Index n, Index i, Index j) {
  return j * n - j * (j - 1) / 2 + (i - j);
}

// Inverse of vech_index: returns the (row, col) pair of coordinate k.
std::pair<Index, Index> vech_coordinate(Index n, Index k);

// Maps the nonnegative parameter vector l onto vec(L).
// Diagonal coordinates carry +1 at (i, i); off-diagonal coordinates (i, j)
// carry -1 at (i, j) and (j, i), so that l_ij is the edge weight.
class DuplicationMatrix {
 public:
  explicit DuplicationMatrix(Index n);

  Index n() const { return n_; }
  Index rows() const { return n_ * n_; }
  Index cols() const { return vech_size(n_); }
  const SparseMatrix& matrix() const { return D_; }

  // diag(D^T D): 1 on diagonal coordinates and 2 on off-diagonal ones.
  VectorXd gram_diagonal() const;

 private:
  Index n_;
  SparseMatrix D_;
};

// diag(D^T D) without materializing D.
VectorXd duplication_gram_diagonal(Index n);

// D^T vec(A) for any square A without materializing D.
VectorXd duplication_adjoint(const MatrixXd& A);

// Reshape of D l into an n x n matrix.
MatrixXd duplication_apply(const VectorXd& l, Index n);

// Symmetric Laplacian stored together with its parameter vector.
class GraphLaplacian {
 public:
  GraphLaplacian() = default;

  // Builds L from l; negative entries are always rejected.
  static GraphLaplacian from_vech(const VectorXd& l, Index n, bool validate = true,
                                  const ValidationTolerances& tol = {});

  // Wraps a dense matrix after checking every Laplacian invariant.
  static GraphLaplacian from_dense(const MatrixXd& L, const ValidationTolerances& tol = {});

  // Builds L from solver output: clamps roundoff negatives to zero and resets
  // each diagonal coordinate to the weighted degree so row sums vanish exactly.
  static GraphLaplacian from_solution(const VectorXd& l, Index n);

  Index n() const { return dense_.rows(); }
  const MatrixXd& dense() const { return dense_; }
  const VectorXd& vech() const { return vech_; }
  double trace() const { return dense_.trace(); }

  // Weighted adjacency W = diag(L) - L.
  MatrixXd adjacency() const;

 private:
  GraphLaplacian(MatrixXd dense, VectorXd vech);

  MatrixXd dense_;
  VectorXd vech_;
};

// Throws ValidationError naming the first violated invariant.
void validate_laplacian(const MatrixXd& L, const ValidationTolerances& tol = {});
bool is_laplacian(const MatrixXd& L, const ValidationTolerances& tol = {});

// L = diag(W 1) - W; W must be symmetric, nonnegative, and zero on the diagonal.
GraphLaplacian laplacian_from_adjacency(const MatrixXd& W, double tol = 1e-12);

// A ⊕ B = I_B ⊗ A + B ⊗ I_A  (A is the fast index).
MatrixXd kron_sum(const MatrixXd& A, const MatrixXd& B);
GraphLaplacian kron_sum(const GraphLaplacian& L_P, const GraphLaplacian& L_Q);

// Flattened node index of (p, q) on the product graph.
constexpr Index product_index(Index P, Index p, Index q) { return q * P + p; }

// T snapshots, each a P x Q matrix.
class MultiDomainData {
 public:
  MultiDomainData() = default;
  MultiDomainData(Index P, Index Q, std::vector<MatrixXd> snapshots);

  // Columns of X are vec of consecutive snapshots.
  static MultiDomainData from_stacked(const MatrixXd& X, Index P, Index Q);

  Index P() const { return P_; }
  Index Q() const { return Q_; }
  Index T() const { return static_cast<Index>(snapshots_.size()); }
  const std::vector<MatrixXd>& snapshots() const { return snapshots_; }
  std::vector<MatrixXd>& snapshots() { return snapshots_; }
  const MatrixXd& operator[](Index t) const { return snapshots_[static_cast<std::size_t>(t)]; }

  MatrixXd stacked() const;

 private:
  Index P_ = 0;
  Index Q_ = 0;
  std::vector<MatrixXd> snapshots_;
};

// sum_t tr(X_t^T L_P X_t) + tr(X_t L_Q X_t^T).
double smoothness(const MultiDomainData& data, const GraphLaplacian& L_P,
                  const GraphLaplacian& L_Q);
double smoothness(const MultiDomainData& data, const MatrixXd& L_P, const MatrixXd& L_Q);

// Laplacian of the path graph 0 - 1 - ... - (n-1) with unit weights.
GraphLaplacian path_laplacian(Index n);

}  // namespace pgl
