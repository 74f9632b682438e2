#include "aloha/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aloha/errors.hpp"
#include "aloha/math.hpp"
#include "aloha/stability.hpp"

namespace aloha {
namespace {

void check_analyzed(const NetworkConfig& config, std::size_t analyzed) {
  if (analyzed >= config.size())
    throw ValidationError("analyzed class index " + std::to_string(analyzed) +
                          " out of range (N=" + std::to_string(config.size()) +
                          ")");
}

void require_single_class_stable(const NetworkConfig& config,
                                 std::size_t analyzed) {
  const double bound = single_class_bound(config, analyzed);
  const double a = config.classes[analyzed].arrival_rate;
  if (!(a < bound))
    throw InstabilityError(
        "class " + std::to_string(analyzed) + " unstable: arrival_rate " +
            std::to_string(a) + " is not strictly below the bound " +
            std::to_string(bound),
        analyzed, bound);
}

}  // namespace

double single_class_bound(const NetworkConfig& config, std::size_t analyzed) {
  validate_config(config, AnalysisMode::SingleClass);
  check_analyzed(config, analyzed);
  const DerivedConstants dc = derive_constants(config, analyzed);
  const TrafficClass& c = config.classes[analyzed];
  const double phi = dc.phi[analyzed];
  return c.access_prob /
         (1.0 + phi * (c.lambda * c.access_prob + dc.zeta));
}

double single_class_closure_bound(const NetworkConfig& config,
                                  std::size_t analyzed) {
  validate_config(config, AnalysisMode::SingleClass);
  check_analyzed(config, analyzed);
  const DerivedConstants dc = derive_constants(config, analyzed);
  const TrafficClass& c = config.classes[analyzed];
  return 1.0 / (1.0 + dc.phi[analyzed] * (c.lambda + dc.zeta));
}

double single_class_success(const NetworkConfig& config, std::size_t analyzed) {
  require_single_class_stable(config, analyzed);
  const DerivedConstants dc = derive_constants(config, analyzed);
  const TrafficClass& c = config.classes[analyzed];
  const double phi = dc.phi[analyzed];
  return (1.0 - phi * c.lambda * c.arrival_rate) / (1.0 + phi * dc.zeta);
}

double single_class_delay(const NetworkConfig& config, std::size_t analyzed) {
  require_single_class_stable(config, analyzed);
  const DerivedConstants dc = derive_constants(config, analyzed);
  const TrafficClass& c = config.classes[analyzed];
  const double phi = dc.phi[analyzed];
  return (1.0 - c.arrival_rate) * (1.0 + phi * dc.zeta) /
         (c.access_prob -
          (1.0 + phi * (c.lambda * c.access_prob + dc.zeta)) * c.arrival_rate);
}

SingleClassResult single_class_analysis(const NetworkConfig& config,
                                        std::size_t analyzed) {
  SingleClassResult r;
  r.stability_bound = single_class_bound(config, analyzed);
  r.closure_bound = single_class_closure_bound(config, analyzed);
  r.success_prob = single_class_success(config, analyzed);
  r.mean_delay = single_class_delay(config, analyzed);
  return r;
}

StationaryMetrics stationary_metrics(const NetworkConfig& config) {
  validate_config(config, AnalysisMode::MultiClass);
  const StabilityVerdict verdict = check_region(config);
  const DerivedConstants dc = derive_constants(config);

  double sum_pla = 0.0;    // sum_j P_j^delta lambda_j a_j
  double sum_phila = 0.0;  // sum_j phi_j lambda_j a_j
  for (std::size_t n = 0; n < config.size(); ++n) {
    const TrafficClass& c = config.classes[n];
    sum_pla += dc.power_delta[n] * c.lambda * c.arrival_rate;
    sum_phila += dc.phi[n] * c.lambda * c.arrival_rate;
  }

  if (!verdict.stable) {
    const std::size_t n = verdict.violated_class.value();
    // The critical arrival rate for class n with the other rates held fixed
    // (from the region inequality with class n's terms isolated).
    const double num = 1.0 - (sum_phila - dc.phi[n] * config.classes[n].lambda *
                                              config.classes[n].arrival_rate);
    const double den =
        sum_pla -
        dc.power_delta[n] * config.classes[n].lambda *
            config.classes[n].arrival_rate +
        dc.power_delta[n] * config.classes[n].lambda;
    double bound = 0.0;
    if (num > 0.0) {
      const double u = (dc.power_delta[n] / dc.phi[n]) * num / den;
      bound = u / (1.0 + u);
    }
    throw InstabilityError(
        "network unstable: class " + std::to_string(n) +
            " violates its region inequality (arrival_rate " +
            std::to_string(config.classes[n].arrival_rate) +
            " >= critical rate " + std::to_string(bound) + ")",
        n, bound);
  }

  StationaryMetrics m;
  const std::size_t n_classes = config.size();
  m.success_prob.resize(n_classes);
  m.mean_delay.resize(n_classes);
  m.load.resize(n_classes);
  m.channel_share.resize(n_classes);

  // Inside the region 1 - sum_phila > 0 and p_{s,n} > a_n hold, so every
  // quotient below is well defined.
  const double interference = sum_pla / (1.0 - sum_phila);
  for (std::size_t n = 0; n < n_classes; ++n) {
    const TrafficClass& c = config.classes[n];
    const double ps =
        1.0 / (1.0 + (dc.phi[n] / dc.power_delta[n]) * interference);
    m.success_prob[n] = ps;
    m.mean_delay[n] = (1.0 - c.arrival_rate) / (ps - c.arrival_rate);
    m.load[n] = c.arrival_rate / ps;
    // Share = phi*lambda*(D/(D-1))*(a/(1-a)); the delay factor equals
    // (1-a)/(1-p_s) exactly, which stays finite for zero-traffic classes.
    m.channel_share[n] =
        ps < 1.0 ? dc.phi[n] * c.lambda * c.arrival_rate / (1.0 - ps) : 0.0;
  }
  return m;
}

ShareResiduals share_identity_residuals(const StationaryMetrics& metrics,
                                        const NetworkConfig& config) {
  validate_config(config, AnalysisMode::MultiClass);
  const DerivedConstants dc = derive_constants(config);
  ShareResiduals r;

  bool any_traffic = false;
  for (const TrafficClass& c : config.classes)
    if (c.arrival_rate > 0.0) any_traffic = true;
  if (!any_traffic) return r;  // identities are vacuous without traffic

  double sum = 0.0;
  double kmin = 0.0;
  double kmax = 0.0;
  for (std::size_t n = 0; n < config.size(); ++n) {
    const double ps = metrics.success_prob[n];
    sum += metrics.channel_share[n];
    // (phi/P^delta)(D/(D-1) * 1/(1-a) - 1), with the delay factor evaluated
    // through D/(D-1) = (1-a)/(1-p_s) so zero-traffic classes stay finite.
    const double k =
        (dc.phi[n] / dc.power_delta[n]) * (1.0 / (1.0 - ps) - 1.0);
    if (n == 0) {
      kmin = kmax = k;
    } else {
      kmin = std::min(kmin, k);
      kmax = std::max(kmax, k);
    }
  }
  r.sum_residual = std::abs(sum - 1.0);
  r.max_pairwise = kmax - kmin;
  return r;
}

double physical_identity_lhs(const NetworkConfig& config,
                             const StationaryMetrics& metrics) {
  validate_config(config, AnalysisMode::MultiClass);
  const double delta = 2.0 / config.alpha;
  double sum = 0.0;
  for (std::size_t n = 0; n < config.size(); ++n) {
    const TrafficClass& c = config.classes[n];
    if (c.arrival_rate == 0.0) continue;
    const double ps = metrics.success_prob[n];
    // D/(D-1) * a/(1-a) = a/(1-p_s), using the exact delay identity.
    sum += 4.0 * c.lambda * c.mean_link_distance * c.mean_link_distance *
           std::pow(c.sir_threshold, delta) * c.arrival_rate / (1.0 - ps);
  }
  return sum;
}

double physical_identity_rhs(double alpha) {
  if (!(alpha > 2.0))
    throw ValidationError("physical_identity_rhs: alpha must be > 2");
  const double x = 2.0 * std::numbers::pi / alpha;
  return std::sin(x) / x;
}

}  // namespace aloha
