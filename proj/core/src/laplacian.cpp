#include "pgl/laplacian.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "pgl/error.hpp"

namespace pgl {

std::pair<Index, Index> vech_coordinate(Index n, Index k) {
  if (k < 0 || k >= vech_size(n)) throw DimensionError("vech coordinate out of range");
  Index j = 0;
  Index start = 0;
  while (start + (n - j) <= k) {
    start += n - j;
    ++j;
  }
  return {j + (k - start), j};
}

DuplicationMatrix::DuplicationMatrix(Index n) : n_(n), D_(n * n, vech_size(n)) {
  if (n < 1) throw DimensionError("duplication matrix needs n >= 1");
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n * n));
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      const Index k = vech_index(n, i, j);
      if (i == j) {
        entries.emplace_back(j * n + i, k, 1.0);
      } else {
        entries.emplace_back(j * n + i, k, -1.0);
        entries.emplace_back(i * n + j, k, -1.0);
      }
    }
  }
  D_.setFromTriplets(entries.begin(), entries.end());
}

VectorXd DuplicationMatrix::gram_diagonal() const { return duplication_gram_diagonal(n_); }

VectorXd duplication_gram_diagonal(Index n) {
  VectorXd g(vech_size(n));
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < n; ++i) g(vech_index(n, i, j)) = (i == j) ? 1.0 : 2.0;
  return g;
}

VectorXd duplication_adjoint(const MatrixXd& A) {
  if (A.rows() != A.cols()) throw DimensionError("duplication adjoint needs a square matrix");
  const Index n = A.rows();
  VectorXd v(vech_size(n));
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < n; ++i)
      v(vech_index(n, i, j)) = (i == j) ? A(i, i) : -(A(i, j) + A(j, i));
  return v;
}

MatrixXd duplication_apply(const VectorXd& l, Index n) {
  if (l.size() != vech_size(n)) {
    std::ostringstream msg;
    msg << "parameter vector has length " << l.size() << ", expected " << vech_size(n)
        << " for n = " << n;
    throw DimensionError(msg.str());
  }
  MatrixXd L(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      const double v = l(vech_index(n, i, j));
      if (i == j) {
        L(i, i) = v;
      } else {
        L(i, j) = -v;
        L(j, i) = -v;
      }
    }
  }
  return L;
}

void validate_laplacian(const MatrixXd& L, const ValidationTolerances& tol) {
  if (L.rows() != L.cols()) throw DimensionError("Laplacian must be square");
  if (!L.allFinite()) throw ValidationError("Laplacian has non-finite entries");
  const Index n = L.rows();
  const double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
  if ((L - L.transpose()).cwiseAbs().maxCoeff() > tol.symmetry * scale)
    throw ValidationError("Laplacian is not symmetric");
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (i != j && L(i, j) > 0.0) throw ValidationError("Laplacian has a positive off-diagonal entry");
  if (L.rowwise().sum().cwiseAbs().maxCoeff() > tol.row_sum * scale)
    throw ValidationError("Laplacian row sum nonzero");
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(L, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues()(0) < tol.psd_floor * scale)
      throw ValidationError("Laplacian is not positive semidefinite");
  }
}

bool is_laplacian(const MatrixXd& L, const ValidationTolerances& tol) {
  try {
    validate_laplacian(L, tol);
  } catch (const ValidationError&) {
    return false;
  } catch (const DimensionError&) {
    return false;
  }
  return true;
}

GraphLaplacian::GraphLaplacian(MatrixXd dense, VectorXd vech)
    : dense_(std::move(dense)), vech_(std::move(vech)) {}

GraphLaplacian GraphLaplacian::from_vech(const VectorXd& l, Index n, bool validate,
                                         const ValidationTolerances& tol) {
  MatrixXd L = duplication_apply(l, n);
  if ((l.array() < 0.0).any()) throw ValidationError("parameter vector has negative entries");
  if (validate) validate_laplacian(L, tol);
  return GraphLaplacian(std::move(L), l);
}

GraphLaplacian GraphLaplacian::from_dense(const MatrixXd& L, const ValidationTolerances& tol) {
  validate_laplacian(L, tol);
  const Index n = L.rows();
  MatrixXd sym = 0.5 * (L + L.transpose());
  VectorXd l(vech_size(n));
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i < n; ++i)
      l(vech_index(n, i, j)) = (i == j) ? sym(i, i) : -sym(i, j);
  return GraphLaplacian(duplication_apply(l, n), l);
}

GraphLaplacian GraphLaplacian::from_solution(const VectorXd& l, Index n) {
  if (l.size() != vech_size(n)) throw DimensionError("solution length does not match n");
  VectorXd snapped = l.cwiseMax(0.0);
  VectorXd degree = VectorXd::Zero(n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double w = snapped(vech_index(n, i, j));
      degree(i) += w;
      degree(j) += w;
    }
  }
  for (Index i = 0; i < n; ++i) snapped(vech_index(n, i, i)) = degree(i);
  return GraphLaplacian(duplication_apply(snapped, n), snapped);
}

MatrixXd GraphLaplacian::adjacency() const {
  MatrixXd W = -dense_;
  W.diagonal().setZero();
  return W;
}

GraphLaplacian laplacian_from_adjacency(const MatrixXd& W, double tol) {
  if (W.rows() != W.cols()) throw DimensionError("adjacency must be square");
  if (!W.allFinite()) throw ValidationError("adjacency has non-finite entries");
  const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw ValidationError("adjacency is not symmetric");
  if ((W.array() < 0.0).any()) throw ValidationError("adjacency has negative weights");
  if (W.diagonal().cwiseAbs().maxCoeff() > tol * scale)
    throw ValidationError("adjacency has a nonzero diagonal");
  const Index n = W.rows();
  VectorXd l(vech_size(n));
  for (Index j = 0; j < n; ++j)
    for (Index i = j + 1; i < n; ++i) l(vech_index(n, i, j)) = 0.5 * (W(i, j) + W(j, i));
  for (Index i = 0; i < n; ++i) l(vech_index(n, i, i)) = 0.0;
  return GraphLaplacian::from_solution(l, n);
}

MatrixXd kron_sum(const MatrixXd& A, const MatrixXd& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols())
    throw DimensionError("kron_sum needs square operands");
  const Index P = A.rows();
  const Index Q = B.rows();
  MatrixXd out = MatrixXd::Zero(P * Q, P * Q);
  for (Index q = 0; q < Q; ++q) out.block(q * P, q * P, P, P) = A;
  for (Index a = 0; a < Q; ++a)
    for (Index b = 0; b < Q; ++b)
      if (B(a, b) != 0.0) out.block(a * P, b * P, P, P).diagonal().array() += B(a, b);
  return out;
}

GraphLaplacian kron_sum(const GraphLaplacian& L_P, const GraphLaplacian& L_Q) {
  MatrixXd L = kron_sum(L_P.dense(), L_Q.dense());
  return GraphLaplacian::from_dense(L);
}

MultiDomainData::MultiDomainData(Index P, Index Q, std::vector<MatrixXd> snapshots)
    : P_(P), Q_(Q), snapshots_(std::move(snapshots)) {
  if (P < 1 || Q < 1) throw DimensionError("factor sizes must be positive");
  for (const auto& X : snapshots_) {
    if (X.rows() != P || X.cols() != Q) {
      std::ostringstream msg;
      msg << "snapshot has shape " << X.rows() << "x" << X.cols() << ", expected " << P << "x"
          << Q;
      throw DimensionError(msg.str());
    }
  }
}

MultiDomainData MultiDomainData::from_stacked(const MatrixXd& X, Index P, Index Q) {
  if (X.rows() != P * Q) throw DimensionError("stacked data must have P*Q rows");
  std::vector<MatrixXd> snaps;
  snaps.reserve(static_cast<std::size_t>(X.cols()));
  for (Index t = 0; t < X.cols(); ++t) snaps.emplace_back(X.col(t).reshaped(P, Q));
  return MultiDomainData(P, Q, std::move(snaps));
}

MatrixXd MultiDomainData::stacked() const {
  MatrixXd X(P_ * Q_, T());
  for (Index t = 0; t < T(); ++t) X.col(t) = (*this)[t].reshaped();
  return X;
}

double smoothness(const MultiDomainData& data, const MatrixXd& L_P, const MatrixXd& L_Q) {
  if (L_P.rows() != data.P() || L_Q.rows() != data.Q())
    throw DimensionError("Laplacian sizes do not match the data");
  double total = 0.0;
  for (const auto& X : data.snapshots()) {
    total += (X.transpose() * L_P * X).trace();
    total += (X * L_Q * X.transpose()).trace();
  }
  return total;
}

double smoothness(const MultiDomainData& data, const GraphLaplacian& L_P,
                  const GraphLaplacian& L_Q) {
  return smoothness(data, L_P.dense(), L_Q.dense());
}

GraphLaplacian path_laplacian(Index n) {
  MatrixXd W = MatrixXd::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) W(i, i + 1) = W(i + 1, i) = 1.0;
  return laplacian_from_adjacency(W);
}

}  // namespace pgl
