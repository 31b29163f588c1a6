#include <benchmark/benchmark.h>

#include "pgl/imputation.hpp"
#include "pgl/synth.hpp"

namespace {

void BM_ImputeStep(benchmark::State& state) {
  const pgl::Index P = state.range(0);
  const pgl::Index Q = state.range(1);
  pgl::CommunityGraphSpec s;
  s.n = P;
  s.k = 3;
  s.seed = 1;
  pgl::CommunityGraphSpec q = s;
  q.n = Q;
  q.k = 2;
  q.seed = 2;
  const pgl::PlantedGraph gp = pgl::random_community_graph(s);
  const pgl::PlantedGraph gq = pgl::random_community_graph(q);
  const pgl::MultiDomainData data = pgl::generate_smooth_signals(gp.L, gq.L, 30, 0.0, 3);
  const pgl::MaskedData m = pgl::apply_mask(data, 0.85, 4);
  const pgl::ImputeConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(pgl::impute_step(m.observed, m.train, gp.L, gq.L, cfg).T());
  state.counters["nodes"] = static_cast<double>(P * Q);
}
BENCHMARK(BM_ImputeStep)->Args({30, 12})->Args({60, 24})->Unit(benchmark::kMillisecond);

}  // namespace
