#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "aloha/model.hpp"

namespace aloha {

// Positive weights for the weighted-delay objective sum_n c_n * D_n.
struct DelayWeights {
  std::vector<double> c;
};

struct PowerAllocation {
  // Per-class transmit powers. Solutions are defined only up to a common
  // positive factor; the gauge fixes the last class to power 1.
  std::vector<double> powers;
  double objective = 0.0;  // sum_n c_n * D_n at this allocation
  std::string normalization = "last-class-power-1";
};

// Closed-form minimizer of sum_n c_n D_n over the transmit powers, for fixed
// arrival rates. Requires the power-free feasibility sum to be < 1 (throws
// InfeasibleError otherwise) and every class to carry traffic (throws
// ValidationError when some arrival_rate is 0: the formula divides by it,
// and an idle class's delay depends only on its own power, which would make
// pricing it degenerate). The resulting configuration is stable.
PowerAllocation optimal_powers(const NetworkConfig& config,
                               const DelayWeights& weights);

struct OracleOptions {
  int starts = 8;            // independent simplex starts (start 0 is all-equal powers)
  int max_iterations = 4000; // per start
  double x_tolerance = 1e-10;      // simplex diameter in log-power space
  double f_tolerance = 1e-13;      // relative objective spread
  std::uint64_t seed = 0x5eedc0de5eedc0deull;
};

// Derivative-free verification optimizer: multi-start Nelder-Mead over
// log-power coordinates with the last class pinned to power 1. Same
// preconditions as optimal_powers, but shares no algebra with it beyond the
// objective itself. Starts run independently; the reduction is deterministic
// (best objective, ties broken by lowest start index).
PowerAllocation numeric_power_oracle(const NetworkConfig& config,
                                     const DelayWeights& weights,
                                     const OracleOptions& options = {});

// Thrown when no oracle start converges within its iteration budget.
class OracleConvergenceError : public std::runtime_error {
 public:
  OracleConvergenceError(const std::string& msg, PowerAllocation best_so_far)
      : std::runtime_error(msg), best(std::move(best_so_far)) {}
  PowerAllocation best;
};

// Joint arrival-rate / power-ratio envelope for a link class (d2d) sharing
// the channel with a delay-capped class (cell).
struct RateEnvelope {
  double max_a1 = 0.0;       // supremum of supportable d2d arrival rates
  double power_ratio = 0.0;  // (phi_d/phi_c)*(P_c^delta/P_d^delta) attaining it
  double psi2_star = 0.0;    // channel share the capped class consumes
};

// Largest arrival rate the d2d class can sustain over all power choices,
// subject to mean-delay caps d1_max (d2d) and d2_max (cell), the cell class
// keeping its configured arrival rate:
//   max_a1 = (1 + phi_d lambda_d (D1*/(D1*-1)) / (1 - Psi2*))^{-1},
//   Psi2*  = phi_c lambda_c (D2*/(D2*-1)) (a_c/(1-a_c)).
// Throws InfeasibleError when Psi2* >= 1 (capped class saturates the
// channel) and ValidationError for caps <= 1 or bad indices.
RateEnvelope max_d2d_rate(const NetworkConfig& config, std::size_t d2d,
                          std::size_t cell, double d1_max, double d2_max);

}  // namespace aloha
