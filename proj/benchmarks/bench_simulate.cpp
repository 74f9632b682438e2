#include <benchmark/benchmark.h>

#include <aloha/model.hpp>
#include <aloha/simulate.hpp>

#include <cmath>
#include <numbers>

namespace {

aloha::SimulationSpec make_spec(aloha::SimMode mode, std::size_t links) {
  aloha::NetworkConfig cfg;
  cfg.alpha = 4.0;
  aloha::TrafficClass c;
  c.lambda = 1.0;
  c.power = 1.0;
  c.mean_link_distance = std::sqrt(1.0 / (2.0 * std::numbers::pi));
  c.sir_threshold = 1.0;
  c.access_prob = 1.0;
  c.arrival_rate = 0.25;
  cfg.classes = {c};

  aloha::SimulationSpec spec;
  spec.config = cfg;
  spec.mode = mode;
  spec.target_links_per_class = links;
  spec.slots = 2000;
  spec.replications = 1;
  spec.seed = 99;
  return spec;
}

void BM_MeanFieldReplication(benchmark::State& state) {
  const aloha::SimulationSpec spec =
      make_spec(aloha::SimMode::MeanField, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(aloha::run_single_replication(spec, 0));
  }
  state.SetItemsProcessed(state.iterations() * spec.slots *
                          static_cast<long long>(state.range(0)));
}
BENCHMARK(BM_MeanFieldReplication)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SpatialReplication(benchmark::State& state) {
  const aloha::SimulationSpec spec =
      make_spec(aloha::SimMode::Spatial, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(aloha::run_single_replication(spec, 0));
  }
  state.SetItemsProcessed(state.iterations() * spec.slots *
                          static_cast<long long>(state.range(0)));
}
BENCHMARK(BM_SpatialReplication)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
