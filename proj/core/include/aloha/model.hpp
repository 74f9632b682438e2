#pragma once

#include <cstddef>
#include <vector>

namespace aloha {

// One class of links: shared physical parameters and traffic intensity.
struct TrafficClass {
  double lambda = 0.0;              // transmitter density (per unit area)
  double power = 1.0;               // transmit power (only ratios matter)
  double mean_link_distance = 1.0;  // mean source-destination separation
  double sir_threshold = 1.0;       // SIR needed for a slot to succeed
  double arrival_rate = 0.0;        // per-slot packet arrival probability, in [0, 1)
  double access_prob = 1.0;         // per-slot medium-access probability, in (0, 1]
};

// A network: common path-loss exponent plus N traffic classes.
struct NetworkConfig {
  double alpha = 4.0;  // path-loss exponent, must exceed 2
  std::vector<TrafficClass> classes;

  std::size_t size() const { return classes.size(); }
};

// What the caller intends to do with the config; selects which extra
// constraints validation enforces.
enum class AnalysisMode {
  SingleClass,  // exactly one class required
  MultiClass,   // any N >= 1
  Simulation,   // additionally requires strictly positive densities
};

// Checks every field; throws ValidationError whose message lists all
// violations. Returns the config unchanged on success so call sites can
// validate inline.
NetworkConfig validate_config(NetworkConfig config, AnalysisMode mode);

// Constants computed once per config and reused by every formula.
struct DerivedConstants {
  double delta = 0.0;       // 2 / alpha
  std::vector<double> phi;  // per-class spatial contention constant
  // Saturated interference that classes other than `analyzed` contribute to
  // the analyzed class, in units normalized by the analyzed class's power.
  double zeta = 0.0;
  std::size_t analyzed = 0;  // class index zeta is expressed for

  std::vector<double> power_delta;  // per-class power^delta, cached

  // Per-class channel shares. derive_constants leaves this empty; it only
  // exists once stationary metrics do (see StationaryMetrics::channel_share,
  // which is where the values are actually computed).
  std::vector<double> channel_share;
};

// Computes delta, phi_n for all classes and zeta for the analyzed class:
//   phi_n  = 4 * Gamma(1+delta) * Gamma(1-delta) * Rbar_n^2 * theta_n^delta
//   zeta   = sum_{m != analyzed} (P_m / P_analyzed)^delta * lambda_m * p_m
double class_contention(double alpha, double mean_link_distance, double sir_threshold);
DerivedConstants derive_constants(const NetworkConfig& config, std::size_t analyzed = 0);

// Exact stationary quantities for every class of a stable network.
struct StationaryMetrics {
  std::vector<double> success_prob;   // per-attempt success probability
  std::vector<double> mean_delay;     // slots from arrival to departure
  std::vector<double> load;           // fraction of slots a queue is busy
  std::vector<double> channel_share;  // fraction of the channel resource used
};

}  // namespace aloha
