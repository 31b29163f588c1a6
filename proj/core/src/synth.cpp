#include "pgl/synth.hpp"

#include <Eigen/Eigenvalues>

#include <random>
#include <sstream>

#include "pgl/error.hpp"

namespace pgl {

void CommunityGraphSpec::validate() const {
  if (n < 1) throw ConfigError("graph size must be positive");
  if (k < 1 || k > n) throw ConfigError("number of blocks must lie in [1, n]");
  if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0))
    throw ConfigError("edge probabilities must lie in [0, 1]");
  if (p_out > p_in) throw ConfigError("p_out must not exceed p_in");
  if (!(weight_lo > 0.0 && weight_lo <= weight_hi)) throw ConfigError("need 0 < weight_lo <= weight_hi");
  if (max_resamples < 1) throw ConfigError("max_resamples must be positive");
  if (n > 1 && k < n && p_in == 0.0)
    throw ConfigError("p_in = 0 cannot produce connected blocks");
}

ClusterLabels balanced_blocks(Index n, int k) {
  ClusterLabels out;
  out.k = k;
  out.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    out.labels[static_cast<std::size_t>(i)] = static_cast<int>((i * k) / n);
  return out;
}

PlantedGraph random_community_graph(const CommunityGraphSpec& spec) {
  spec.validate();
  const Index n = spec.n;
  PlantedGraph out;
  out.blocks = balanced_blocks(n, spec.k);
  const auto& lab = out.blocks.labels;
  const int expected = spec.p_out > 0.0 ? 1 : spec.k;

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> weight(spec.weight_lo, spec.weight_hi);
  for (int attempt = 0; attempt < spec.max_resamples; ++attempt) {
    MatrixXd W = MatrixXd::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = j + 1; i < n; ++i) {
        const bool same = lab[static_cast<std::size_t>(i)] == lab[static_cast<std::size_t>(j)];
        const double u = coin(rng);
        const double w = weight(rng);
        if (u < (same ? spec.p_in : spec.p_out)) W(i, j) = W(j, i) = w;
      }
    }
    GraphLaplacian L = laplacian_from_adjacency(W);
    if (connected_components(L).count != expected) continue;
    if (spec.trace_normalize && L.trace() > 0.0) {
      const double s = static_cast<double>(n) / L.trace();
      L = GraphLaplacian::from_solution(s * L.vech(), n);
    }
    out.L = std::move(L);
    return out;
  }
  std::ostringstream msg;
  msg << "could not sample a graph with " << expected << " component(s) in "
      << spec.max_resamples << " attempts";
  throw ConfigError(msg.str());
}

MultiDomainData generate_smooth_signals(const GraphLaplacian& L_P, const GraphLaplacian& L_Q,
                                        Index T, double sigma2, std::uint64_t seed) {
  if (T < 0) throw ConfigError("T must be nonnegative");
  if (!(sigma2 >= 0.0)) throw ConfigError("noise variance must be nonnegative");
  const Index P = L_P.n();
  const Index Q = L_Q.n();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eP(L_P.dense());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eQ(L_Q.dense());
  const VectorXd& lp = eP.eigenvalues();
  const VectorXd& lq = eQ.eigenvalues();
  const double scale = std::max(lp.cwiseAbs().maxCoeff(), lq.cwiseAbs().maxCoeff());
  const double zero = 1e-10 * std::max(1.0, scale);

  MatrixXd stddev(P, Q);
  for (Index k = 0; k < Q; ++k) {
    for (Index j = 0; j < P; ++j) {
      const double s = lp(j) + lq(k);
      stddev(j, k) = s > zero ? 1.0 / std::sqrt(s) : 0.0;
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise = std::sqrt(sigma2);
  std::vector<MatrixXd> snaps;
  snaps.reserve(static_cast<std::size_t>(T));
  for (Index t = 0; t < T; ++t) {
    MatrixXd Z(P, Q);
    for (Index k = 0; k < Q; ++k)
      for (Index j = 0; j < P; ++j) Z(j, k) = normal(rng);
    MatrixXd X = eP.eigenvectors() * Z.cwiseProduct(stddev) * eQ.eigenvectors().transpose();
    if (noise > 0.0)
      for (Index k = 0; k < Q; ++k)
        for (Index j = 0; j < P; ++j) X(j, k) += noise * normal(rng);
    snaps.push_back(std::move(X));
  }
  return MultiDomainData(P, Q, std::move(snaps));
}

MultiDomainData mask_data(const MultiDomainData& data, const std::vector<Mask>& mask) {
  if (static_cast<Index>(mask.size()) != data.T()) throw DimensionError("mask count differs");
  std::vector<MatrixXd> snaps;
  snaps.reserve(mask.size());
  for (Index t = 0; t < data.T(); ++t) {
    const Mask& m = mask[static_cast<std::size_t>(t)];
    if (m.rows() != data.P() || m.cols() != data.Q()) throw DimensionError("mask shape differs");
    snaps.emplace_back((m * data[t].array()).matrix());
  }
  return MultiDomainData(data.P(), data.Q(), std::move(snaps));
}

MaskedData apply_mask(const MultiDomainData& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0))
    throw ConfigError("train fraction must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  MaskedData out;
  double test_total = 0.0;
  for (Index t = 0; t < data.T(); ++t) {
    Mask train(data.P(), data.Q());
    for (Index q = 0; q < data.Q(); ++q)
      for (Index p = 0; p < data.P(); ++p) train(p, q) = coin(rng) < train_fraction ? 1.0 : 0.0;
    Mask test = 1.0 - train;
    test_total += test.sum();
    out.train.push_back(std::move(train));
    out.test.push_back(std::move(test));
  }
  out.observed = mask_data(data, out.train);
  out.degenerate = test_total == 0.0;
  return out;
}

}  // namespace pgl
