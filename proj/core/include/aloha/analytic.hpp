#pragma once

#include <cstddef>

#include "aloha/model.hpp"

namespace aloha {

// Stationary results for one class when every other class is saturated
// (transmits dummy packets).
struct SingleClassResult {
  double stability_bound = 0.0;  // strict sup of stable arrival rates
  double closure_bound = 0.0;    // region-closure bound, attained at p = 1
  double success_prob = 0.0;
  double mean_delay = 0.0;
};

// Strict upper bound on the arrival rate: p / (1 + phi*(lambda*p + zeta)).
double single_class_bound(const NetworkConfig& config, std::size_t analyzed = 0);

// Bound of the closed region over all access probabilities, attained at
// p = 1: 1 / (1 + phi*(lambda + zeta)).
double single_class_closure_bound(const NetworkConfig& config,
                                  std::size_t analyzed = 0);

// Stationary success probability (1 - phi*lambda*a) / (1 + phi*zeta).
// Throws InstabilityError (carrying the violated bound) when the arrival
// rate is not strictly below single_class_bound.
double single_class_success(const NetworkConfig& config,
                            std::size_t analyzed = 0);

// Stationary mean delay (1-a)(1+phi*zeta) / (p - (1+phi*(lambda*p+zeta))*a),
// equal to (1-a)/(p*p_s - a). Same stability precondition as success.
double single_class_delay(const NetworkConfig& config, std::size_t analyzed = 0);

SingleClassResult single_class_analysis(const NetworkConfig& config,
                                        std::size_t analyzed = 0);

// Stationary metrics of the full N-class network (all access probs 1):
//   p_{s,n} = (1 + (phi_n/P_n^delta) * sum_j P_j^delta lambda_j a_j
//                                    / (1 - sum_j phi_j lambda_j a_j))^{-1}
//   D_n = (1 - a_n) / (p_{s,n} - a_n)
// plus per-class load a_n/p_{s,n} and channel share. Throws
// InstabilityError naming the first violated class when the config is
// outside the stability region.
StationaryMetrics stationary_metrics(const NetworkConfig& config);

// Residuals of the two steady-state channel-share identities: the shares sum
// to 1, and (phi_j/P_j^delta)(D_j/(D_j-1) * 1/(1-a_j) - 1) takes the same
// value for every class. Both are identically zero in exact arithmetic for
// any stable network; the returned values measure floating-point error.
// Degenerate all-zero-traffic metrics return zeros (the identities are
// vacuous without traffic).
struct ShareResiduals {
  double sum_residual = 0.0;   // |sum of channel shares - 1|
  double max_pairwise = 0.0;   // spread of the per-class invariant value
};
ShareResiduals share_identity_residuals(const StationaryMetrics& metrics,
                                        const NetworkConfig& config);

// Left-hand side of the share identity written in physical parameters:
//   sum_n 4 lambda_n Rbar_n^2 theta_n^(2/alpha) (D_n/(D_n-1)) (a_n/(1-a_n)),
// which equals sin(2*pi/alpha)/(2*pi/alpha) at steady state.
double physical_identity_lhs(const NetworkConfig& config,
                             const StationaryMetrics& metrics);
double physical_identity_rhs(double alpha);

}  // namespace aloha
