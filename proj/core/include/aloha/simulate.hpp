#pragma once

#include <cstdint>
#include <vector>

#include "aloha/model.hpp"
#include "aloha/stats.hpp"

namespace aloha {

enum class SimMode {
  Spatial,    // full torus geometry: positions, Rayleigh distances, fading
  MeanField,  // per-slot success from the closed-form law at current activity
};

struct SimulationSpec {
  NetworkConfig config;
  // The torus is sized so the densest class has this many links; sparser
  // classes get proportionally fewer (at least 1).
  int target_links_per_class = 400;
  std::int64_t slots = 10000;       // total simulated slots (>= 1000)
  double warmup_fraction = 0.2;     // leading fraction excluded from stats
  SimMode mode = SimMode::Spatial;
  std::uint64_t seed = 1;
  int replications = 10;
  // Link-distance bin edges for the conditional-success histogram (spatial
  // mode only); empty disables collection.
  std::vector<double> sir_bin_edges;
  // Hard per-link queue cap; exceeding it raises QueueOverflowError.
  std::int64_t max_queue_len = 1 << 20;
};

// Conditional-success histogram cell: attempts whose link distance fell in
// [lo, hi), how many succeeded, and reference values for comparing against
// the closed-form conditional law.
struct SirBin {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t attempts = 0;
  std::int64_t successes = 0;
  double sum_r2 = 0.0;  // sum of squared link distances of these attempts
  // Sum over attempts of the conditional success law evaluated at the drawn
  // distance, with every queue assumed backlogged (the saturated reference
  // scenario this histogram exists to validate).
  double saturated_law_successes = 0.0;
};

// One thinned trajectory sample: state at the end of the given slot plus
// that slot's attempt/success counts for the class.
struct TrajectoryPoint {
  std::int64_t slot = 0;
  double mean_queue_len = 0.0;
  std::int64_t attempts = 0;
  std::int64_t successes = 0;
};

struct SimulationResult {
  // Per-class statistics. For a single replication these carry the point
  // value only; estimate_confidence fills in 95% t-intervals across
  // replications.
  std::vector<Estimate> success_prob_hat;        // P(success | attempt)
  std::vector<Estimate> mean_delay_hat;          // arrival to departure, slots
  std::vector<Estimate> drift_estimate;          // queue-length slope per slot
  std::vector<Estimate> mean_link_distance_hat;  // spatial mode only

  std::vector<std::vector<TrajectoryPoint>> queue_trajectory;  // [class]
  std::int64_t trajectory_stride = 1;
  // Raw per-replication drift slopes, [class][replication]; the basis of
  // drift_estimate and useful for all-replications-positive checks.
  std::vector<std::vector<double>> drift_per_replication;
  std::vector<std::vector<SirBin>> sir_histogram;  // [class][bin]

  std::int64_t measurement_slots = 0;
  std::int64_t resampled_distances = 0;  // Rayleigh draws beyond the torus cap
  int replications_done = 0;
  // True when N >= 2 and some access probability is below 1: the dynamics
  // are simulated faithfully but no closed form exists to validate them.
  bool unvalidated_regime = false;
};

// Simulates spec.replications independent replications (sequentially, each
// on its own RNG stream derived from (seed, replication)) and aggregates
// them. Identical specs give bit-identical results.
SimulationResult run(const SimulationSpec& spec);

// run() with the mode forced to mean-field.
SimulationResult run_mean_field(SimulationSpec spec);

// One replication; the building block of run().
SimulationResult run_single_replication(const SimulationSpec& spec,
                                        int replication);

// Mean and 95% Student-t intervals across replications for every statistic;
// trajectories are averaged pointwise with counts pooled, histograms pooled.
// Fewer than 2 replications yields defined values flagged has_ci = false.
SimulationResult estimate_confidence(
    const std::vector<SimulationResult>& replications);

}  // namespace aloha
