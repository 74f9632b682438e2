#include <benchmark/benchmark.h>

#include <aloha/analytic.hpp>
#include <aloha/model.hpp>
#include <aloha/optimize.hpp>
#include <aloha/stability.hpp>

#include <cmath>
#include <cstddef>
#include <numbers>

namespace {

// Symmetric stable network with per-class contention constant 0.3 and a
// moderate load; class count is the benchmark parameter.
aloha::NetworkConfig make_config(std::size_t classes) {
  aloha::NetworkConfig cfg;
  cfg.alpha = 4.0;
  aloha::TrafficClass c;
  c.lambda = 1.0;
  c.power = 1.0;
  c.mean_link_distance = std::sqrt(0.3 / (2.0 * std::numbers::pi));
  c.sir_threshold = 1.0;
  c.access_prob = 1.0;
  c.arrival_rate = 0.2 / static_cast<double>(classes);
  cfg.classes.assign(classes, c);
  // Stagger powers so nothing collapses to the symmetric special case.
  for (std::size_t n = 0; n < classes; ++n) {
    cfg.classes[n].power = 1.0 + 0.25 * static_cast<double>(n);
  }
  return cfg;
}

void BM_StationaryMetrics(benchmark::State& state) {
  const aloha::NetworkConfig cfg = make_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(aloha::stationary_metrics(cfg));
  }
}
BENCHMARK(BM_StationaryMetrics)->Arg(2)->Arg(4)->Arg(8);

void BM_CheckRegion(benchmark::State& state) {
  const aloha::NetworkConfig cfg = make_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(aloha::check_region(cfg));
  }
}
BENCHMARK(BM_CheckRegion)->Arg(2)->Arg(4)->Arg(8);

void BM_PermutationRegion(benchmark::State& state) {
  const aloha::NetworkConfig cfg = make_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(aloha::check_permutation_region(cfg));
  }
}
BENCHMARK(BM_PermutationRegion)->Arg(2)->Arg(4)->Arg(7);

void BM_OptimalPowers(benchmark::State& state) {
  const aloha::NetworkConfig cfg = make_config(static_cast<std::size_t>(state.range(0)));
  const aloha::DelayWeights weights{std::vector<double>(cfg.size(), 1.0)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(aloha::optimal_powers(cfg, weights));
  }
}
BENCHMARK(BM_OptimalPowers)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
