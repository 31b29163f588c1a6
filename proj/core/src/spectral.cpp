#include "pgl/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "pgl/error.hpp"

namespace pgl {

EigenPairs smallest_eigpairs(const MatrixXd& L, Index K) {
  if (L.rows() != L.cols()) throw DimensionError("eigendecomposition needs a square matrix");
  if (K < 1 || K > L.rows()) throw DimensionError("K must lie in [1, n]");
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (L + L.transpose()));
  if (eig.info() != Eigen::Success) throw Error("eigendecomposition failed");
  EigenPairs out;
  out.values = eig.eigenvalues().head(K);
  out.vectors = eig.eigenvectors().leftCols(K);
  for (Index c = 0; c < K; ++c) {
    Index arg = 0;
    out.vectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (out.vectors(arg, c) < 0.0) out.vectors.col(c) *= -1.0;
  }
  return out;
}

MatrixXd product_embedding(const MatrixXd& V_P, const MatrixXd& V_Q) {
  const Index P = V_P.rows();
  const Index Q = V_Q.rows();
  MatrixXd V(P * Q, V_P.cols() * V_Q.cols());
  for (Index a = 0; a < Q; ++a)
    for (Index b = 0; b < V_Q.cols(); ++b)
      V.block(a * P, b * V_P.cols(), P, V_P.cols()) = V_Q(a, b) * V_P;
  return V;
}

ComponentReport connected_components(const MatrixXd& L, double zero_tol, double edge_tol) {
  if (L.rows() != L.cols()) throw DimensionError("Laplacian must be square");
  const Index n = L.rows();
  ComponentReport report;
  report.labels.labels.assign(static_cast<std::size_t>(n), -1);
  int next = 0;
  std::vector<Index> stack;
  for (Index s = 0; s < n; ++s) {
    if (report.labels.labels[static_cast<std::size_t>(s)] >= 0) continue;
    report.labels.labels[static_cast<std::size_t>(s)] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index v = 0; v < n; ++v) {
        if (v == u || report.labels.labels[static_cast<std::size_t>(v)] >= 0) continue;
        if (-L(u, v) > edge_tol || -L(v, u) > edge_tol) {
          report.labels.labels[static_cast<std::size_t>(v)] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  report.count = next;
  report.labels.k = next;

  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (L + L.transpose()), Eigen::EigenvaluesOnly);
    const VectorXd& ev = eig.eigenvalues();
    const double threshold = zero_tol * std::max(ev(n - 1), std::numeric_limits<double>::min());
    report.spectral_count = static_cast<int>((ev.array() < threshold).count());
  }
  if (!report.consistent()) {
    std::ostringstream msg;
    msg << "spectral count " << report.spectral_count << " disagrees with traversal count "
        << report.count;
    report.diagnostic = msg.str();
  }
  return report;
}

ComponentReport connected_components(const GraphLaplacian& L, double zero_tol, double edge_tol) {
  return connected_components(L.dense(), zero_tol, edge_tol);
}

namespace {

struct KMeansRun {
  std::vector<int> labels;
  double inertia = std::numeric_limits<double>::infinity();
  bool degenerate = false;
};

KMeansRun lloyd(const MatrixXd& X, int k, int max_iter, std::mt19937_64& rng) {
  const Index n = X.rows();
  MatrixXd centers(k, X.cols());
  VectorXd dist2 = VectorXd::Constant(n, std::numeric_limits<double>::infinity());

  std::uniform_int_distribution<Index> pick(0, n - 1);
  centers.row(0) = X.row(pick(rng));
  for (int c = 1; c < k; ++c) {
    for (Index i = 0; i < n; ++i)
      dist2(i) = std::min(dist2(i), (X.row(i) - centers.row(c - 1)).squaredNorm());
    const double total = dist2.sum();
    Index chosen = pick(rng);
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      chosen = n - 1;
      for (Index i = 0; i < n; ++i) {
        target -= dist2(i);
        if (target <= 0.0) {
          chosen = i;
          break;
        }
      }
    }
    centers.row(c) = X.row(chosen);
  }

  KMeansRun run;
  run.labels.assign(static_cast<std::size_t>(n), 0);
  VectorXd best_d(n);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = (it == 0);
    for (Index i = 0; i < n; ++i) {
      int arg = 0;
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double dd = (X.row(i) - centers.row(c)).squaredNorm();
        if (dd < best) {
          best = dd;
          arg = c;
        }
      }
      best_d(i) = best;
      if (run.labels[static_cast<std::size_t>(i)] != arg) {
        run.labels[static_cast<std::size_t>(i)] = arg;
        changed = true;
      }
    }

    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (int lab : run.labels) ++counts[static_cast<std::size_t>(lab)];
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Index far = 0;
      best_d.maxCoeff(&far);
      if (best_d(far) <= 0.0) {
        run.degenerate = true;
        continue;
      }
      --counts[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(far)])];
      run.labels[static_cast<std::size_t>(far)] = c;
      ++counts[static_cast<std::size_t>(c)];
      best_d(far) = 0.0;
      changed = true;
    }

    centers.setZero();
    for (Index i = 0; i < n; ++i) centers.row(run.labels[static_cast<std::size_t>(i)]) += X.row(i);
    for (int c = 0; c < k; ++c)
      if (counts[static_cast<std::size_t>(c)] > 0)
        centers.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    if (!changed) break;
  }

  run.inertia = 0.0;
  for (Index i = 0; i < n; ++i)
    run.inertia += (X.row(i) - centers.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
  return run;
}

// Relabel clusters in order of first appearance so outputs are canonical.
void canonicalize(std::vector<int>& labels, int k) {
  std::vector<int> map(static_cast<std::size_t>(k), -1);
  int next = 0;
  for (int& lab : labels) {
    if (map[static_cast<std::size_t>(lab)] < 0) map[static_cast<std::size_t>(lab)] = next++;
    lab = map[static_cast<std::size_t>(lab)];
  }
}

}  // namespace

ClusterLabels kmeans(const MatrixXd& X, int k, const KMeansConfig& config) {
  const Index n = X.rows();
  if (k < 1) throw ConfigError("k must be positive");
  if (config.restarts < 1 || config.max_iter < 1)
    throw ConfigError("restarts and max_iter must be positive");
  if (n == 0) throw DimensionError("k-means needs at least one point");
  ClusterLabels out;
  out.k = k;
  if (k > n) {
    out.labels.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) out.labels[static_cast<std::size_t>(i)] = static_cast<int>(i);
    out.degenerate = true;
    return out;
  }
  std::mt19937_64 rng(config.seed);
  KMeansRun best;
  for (int r = 0; r < config.restarts; ++r) {
    KMeansRun run = lloyd(X, k, config.max_iter, rng);
    if (run.inertia < best.inertia - 1e-12 * std::max(1.0, best.inertia) || best.labels.empty())
      best = std::move(run);
  }
  canonicalize(best.labels, k);
  out.labels = std::move(best.labels);
  out.degenerate = best.degenerate;
  return out;
}

ClusterLabels spectral_clustering(const MatrixXd& L, int K, const KMeansConfig& config) {
  EigenPairs eig = smallest_eigpairs(L, K);
  return kmeans(eig.vectors, K, config);
}

ClusterLabels product_labels(const ClusterLabels& labels_P, const ClusterLabels& labels_Q) {
  const std::size_t P = labels_P.labels.size();
  const std::size_t Q = labels_Q.labels.size();
  ClusterLabels out;
  out.k = labels_P.k * labels_Q.k;
  out.degenerate = labels_P.degenerate || labels_Q.degenerate;
  out.labels.resize(P * Q);
  for (std::size_t q = 0; q < Q; ++q)
    for (std::size_t p = 0; p < P; ++p)
      out.labels[q * P + p] = labels_Q.labels[q] * labels_P.k + labels_P.labels[p];
  return out;
}

}  // namespace pgl
