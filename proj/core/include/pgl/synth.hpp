#pragma once

#include <cstdint>
#include <vector>

#include "pgl/laplacian.hpp"
#include "pgl/spectral.hpp"

namespace pgl {

struct CommunityGraphSpec {
  Index n = 10;
  // Number of balanced blocks. With p_out = 0 the blocks are the connected components.
  int k = 1;
  double p_in = 1.0;
  double p_out = 0.02;
  double weight_lo = 0.1;
  double weight_hi = 1.0;
  std::uint64_t seed = 0;
  int max_resamples = 10000;
  // Rescale so that tr(L) = n.
  bool trace_normalize = true;

  void validate() const;
};

struct PlantedGraph {
  GraphLaplacian L;
  ClusterLabels blocks;
};

// Stochastic block model with uniform weights. Resamples until every block is
// connected and, when p_out > 0, until the whole graph is connected.
PlantedGraph random_community_graph(const CommunityGraphSpec& spec);

// Block membership used by random_community_graph: sizes differ by at most one.
ClusterLabels balanced_blocks(Index n, int k);

// Draws X_t = U_P Xtilde_t U_Q^T with Xtilde_t(j, k) ~ N(0, 1 / (lambda_j + mu_k)), exactly
// zero when the eigenvalue sum vanishes, plus white noise of variance sigma2.
MultiDomainData generate_smooth_signals(const GraphLaplacian& L_P, const GraphLaplacian& L_Q,
                                        Index T, double sigma2, std::uint64_t seed);

using Mask = Eigen::ArrayXXd;  // 0/1 entries per snapshot

struct MaskedData {
  MultiDomainData observed;  // zero outside the training mask
  std::vector<Mask> train;
  std::vector<Mask> test;
  bool degenerate = false;  // the test mask selects nothing
};

// Independent Bernoulli(train_fraction) training mask per entry; the test mask is its complement.
MaskedData apply_mask(const MultiDomainData& data, double train_fraction, std::uint64_t seed);

// Hadamard product with the mask.
MultiDomainData mask_data(const MultiDomainData& data, const std::vector<Mask>& mask);

}  // namespace pgl
