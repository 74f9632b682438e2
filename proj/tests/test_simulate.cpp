#include <cmath>
#include <numbers>

#include <doctest.h>

#include "aloha/analytic.hpp"
#include "aloha/errors.hpp"
#include "aloha/model.hpp"
#include "aloha/simulate.hpp"

using namespace aloha;

namespace {

// Single class with phi*lambda = 1 (alpha = 4, theta = 1, lambda = 1).
SimulationSpec base_spec(double a, double p = 1.0) {
  NetworkConfig cfg;
  cfg.alpha = 4.0;
  TrafficClass c;
  c.lambda = 1.0;
  c.mean_link_distance = std::sqrt(1.0 / (2.0 * std::numbers::pi));
  c.sir_threshold = 1.0;
  c.arrival_rate = a;
  c.access_prob = p;
  cfg.classes = {c};

  SimulationSpec spec;
  spec.config = cfg;
  spec.target_links_per_class = 100;
  spec.slots = 3000;
  spec.replications = 3;
  spec.seed = 42;
  return spec;
}

}  // namespace

TEST_CASE("simulation spec validation") {
  SimulationSpec spec = base_spec(0.1);
  spec.slots = 999;
  CHECK_THROWS_AS(run(spec), ValidationError);
  spec = base_spec(0.1);
  spec.target_links_per_class = 49;
  CHECK_THROWS_AS(run(spec), ValidationError);
  spec = base_spec(0.1);
  spec.warmup_fraction = 1.0;
  CHECK_THROWS_AS(run(spec), ValidationError);
  spec = base_spec(0.1);
  spec.replications = 0;
  CHECK_THROWS_AS(run(spec), ValidationError);
  spec = base_spec(0.1);
  spec.sir_bin_edges = {0.5};
  CHECK_THROWS_AS(run(spec), ValidationError);
  spec = base_spec(0.1);
  spec.sir_bin_edges = {0.5, 0.5, 0.7};
  CHECK_THROWS_AS(run(spec), ValidationError);
  spec = base_spec(0.1);
  spec.sir_bin_edges = {-0.1, 0.5};
  CHECK_THROWS_AS(run(spec), ValidationError);
}

TEST_CASE("identical specs give identical results") {
  const SimulationSpec spec = base_spec(0.15);
  const SimulationResult a = run_mean_field(spec);
  const SimulationResult b = run_mean_field(spec);
  CHECK(a.success_prob_hat[0].value == b.success_prob_hat[0].value);
  CHECK(a.mean_delay_hat[0].value == b.mean_delay_hat[0].value);
  CHECK(a.drift_per_replication[0] == b.drift_per_replication[0]);

  SimulationSpec reseeded = spec;
  reseeded.seed = 43;
  const SimulationResult c = run_mean_field(reseeded);
  CHECK(a.success_prob_hat[0].value != c.success_prob_hat[0].value);
}

TEST_CASE("mean-field run tracks the closed-form stationary point") {
  // a = 0.1 with phi*lambda = 1: ps = 0.9, D = 0.9/0.8 = 1.125.
  SimulationSpec spec = base_spec(0.1);
  spec.slots = 6000;
  const SimulationResult r = run_mean_field(spec);
  REQUIRE(r.replications_done == 3);
  REQUIRE(r.success_prob_hat[0].defined);
  CHECK(r.success_prob_hat[0].has_ci);
  CHECK(std::fabs(r.success_prob_hat[0].value - 0.9) < 0.03);
  REQUIRE(r.mean_delay_hat[0].defined);
  CHECK(std::fabs(r.mean_delay_hat[0].value - 1.125) < 0.1);
  CHECK(r.mean_delay_hat[0].value >= 1.0);
  // Stable queue: drift indistinguishable from zero at this scale.
  CHECK(std::fabs(r.drift_estimate[0].value) < 1e-3);
  CHECK_FALSE(r.unvalidated_regime);
  // No geometry in mean-field mode.
  CHECK_FALSE(r.mean_link_distance_hat[0].defined);
  CHECK(r.resampled_distances == 0);
}

TEST_CASE("an overloaded queue drifts upward in every replication") {
  SimulationSpec spec = base_spec(0.8);  // bound is 0.5
  const SimulationResult r = run_mean_field(spec);
  REQUIRE(r.drift_per_replication[0].size() == 3);
  for (double d : r.drift_per_replication[0]) CHECK(d > 0.0);
  // The queue builds up, so mean delay readings are large.
  CHECK(r.mean_delay_hat[0].value > 10.0);
}

TEST_CASE("spatial run: geometry statistics and stationary agreement") {
  SimulationSpec spec = base_spec(0.1);
  spec.mode = SimMode::Spatial;
  spec.slots = 3000;
  const SimulationResult r = run(spec);

  REQUIRE(r.success_prob_hat[0].defined);
  CHECK(std::fabs(r.success_prob_hat[0].value - 0.9) < 0.05);

  // Sampled link distances must reproduce the configured mean.
  REQUIRE(r.mean_link_distance_hat[0].defined);
  const double rbar = spec.config.classes[0].mean_link_distance;
  CHECK(std::fabs(r.mean_link_distance_hat[0].value - rbar) / rbar < 0.05);

  // The torus is 10x10 while Rbar is ~0.4, so cap hits are rare.
  CHECK(r.resampled_distances < 100);
  CHECK(r.measurement_slots == spec.slots - spec.slots / 5);
  CHECK(r.sir_histogram[0].empty());
}

TEST_CASE("spatial run: conditional-success histogram accounting") {
  SimulationSpec spec = base_spec(0.9);  // saturated regime
  spec.mode = SimMode::Spatial;
  spec.replications = 2;
  const double rbar = spec.config.classes[0].mean_link_distance;
  spec.sir_bin_edges = {0.25 * rbar, 0.75 * rbar, 1.25 * rbar, 2.0 * rbar};
  const SimulationResult r = run(spec);

  REQUIRE(r.sir_histogram[0].size() == 3);
  std::int64_t binned = 0;
  for (const SirBin& b : r.sir_histogram[0]) {
    CHECK(b.lo < b.hi);
    CHECK(b.successes <= b.attempts);
    CHECK(b.saturated_law_successes <= static_cast<double>(b.attempts));
    if (b.attempts > 0) {
      const double mean_r2 = b.sum_r2 / static_cast<double>(b.attempts);
      CHECK(mean_r2 >= b.lo * b.lo);
      CHECK(mean_r2 <= b.hi * b.hi);
    }
    binned += b.attempts;
  }
  CHECK(binned > 0);
  // Success drops with distance: the law column must be decreasing in r.
  const auto& bins = r.sir_histogram[0];
  for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
    if (bins[i].attempts == 0 || bins[i + 1].attempts == 0) continue;
    CHECK(bins[i].saturated_law_successes / static_cast<double>(bins[i].attempts) >
          bins[i + 1].saturated_law_successes /
              static_cast<double>(bins[i + 1].attempts));
  }
}

TEST_CASE("trajectories are thinned, aligned, and pooled") {
  SimulationSpec spec = base_spec(0.2);
  spec.slots = 4096;
  const SimulationResult r = run_mean_field(spec);
  CHECK(r.trajectory_stride == 4);  // 4096/1024
  REQUIRE(r.queue_trajectory.size() == 1);
  CHECK(r.queue_trajectory[0].size() == 1024);
  CHECK(r.queue_trajectory[0][0].slot == 0);
  CHECK(r.queue_trajectory[0][1].slot == 4);
  for (const TrajectoryPoint& pt : r.queue_trajectory[0]) {
    CHECK(pt.mean_queue_len >= 0.0);
    CHECK(pt.successes <= pt.attempts);
  }
}

TEST_CASE("confidence aggregation needs matching replications") {
  const SimulationSpec one = base_spec(0.1);
  SimulationSpec two = base_spec(0.1);
  two.config.classes.push_back(two.config.classes[0]);

  const SimulationResult ra = run_single_replication(one, 0);
  const SimulationResult rb = run_single_replication(two, 0);
  CHECK_THROWS_AS(estimate_confidence({ra, rb}), ValidationError);
  CHECK_THROWS_AS(estimate_confidence({}), ValidationError);

  // A lone replication aggregates to defined values without intervals.
  const SimulationResult solo = estimate_confidence({ra});
  CHECK(solo.replications_done == 1);
  CHECK(solo.success_prob_hat[0].defined);
  CHECK_FALSE(solo.success_prob_hat[0].has_ci);
}

TEST_CASE("multi-class with reduced access is flagged unvalidated") {
  SimulationSpec spec = base_spec(0.05, 0.8);
  TrafficClass second = spec.config.classes[0];
  second.access_prob = 1.0;
  spec.config.classes.push_back(second);
  spec.slots = 1000;
  spec.replications = 1;
  const SimulationResult r = run_mean_field(spec);
  CHECK(r.unvalidated_regime);

  SimulationSpec single = base_spec(0.05, 0.8);
  single.slots = 1000;
  single.replications = 1;
  CHECK_FALSE(run_mean_field(single).unvalidated_regime);
}

TEST_CASE("queue overflow raises with class and slot attached") {
  SimulationSpec spec = base_spec(0.9);
  spec.max_queue_len = 4;
  try {
    run_mean_field(spec);
    FAIL("expected QueueOverflowError");
  } catch (const QueueOverflowError& e) {
    CHECK(e.class_index() == 0);
    CHECK(e.slot() > 0);
    CHECK(e.slot() < spec.slots);
  }
}
