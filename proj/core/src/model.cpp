#include "aloha/model.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "aloha/errors.hpp"
#include "aloha/math.hpp"

namespace aloha {
namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

NetworkConfig validate_config(NetworkConfig config, AnalysisMode mode) {
  std::vector<std::string> bad;
  auto complain = [&bad](const std::string& msg) { bad.push_back(msg); };

  if (!finite(config.alpha) || config.alpha <= 2.0)
    complain("alpha must be finite and > 2");
  if (config.classes.empty()) complain("at least one traffic class required");

  for (std::size_t n = 0; n < config.classes.size(); ++n) {
    const TrafficClass& c = config.classes[n];
    const std::string at = "classes[" + std::to_string(n) + "].";
    if (!finite(c.lambda) || c.lambda <= 0.0)
      complain(at + "lambda must be finite and > 0");
    if (!finite(c.power) || c.power <= 0.0)
      complain(at + "power must be finite and > 0");
    if (!finite(c.mean_link_distance) || c.mean_link_distance <= 0.0)
      complain(at + "mean_link_distance must be finite and > 0");
    if (!finite(c.sir_threshold) || c.sir_threshold <= 0.0)
      complain(at + "sir_threshold must be finite and > 0");
    if (!finite(c.arrival_rate) || c.arrival_rate < 0.0 || c.arrival_rate >= 1.0)
      complain(at + "arrival_rate must lie in [0, 1)");
    if (!finite(c.access_prob) || c.access_prob <= 0.0 || c.access_prob > 1.0)
      complain(at + "access_prob must lie in (0, 1]");
    else if (mode == AnalysisMode::MultiClass && c.access_prob != 1.0)
      complain(at + "access_prob must be 1 for multi-class analysis");
  }

  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "invalid configuration:";
    for (const std::string& b : bad) msg << "\n  - " << b;
    throw ValidationError(msg.str());
  }
  return config;
}

double class_contention(double alpha, double mean_link_distance,
                        double sir_threshold) {
  if (!finite(alpha) || alpha <= 2.0)
    throw ValidationError("class_contention: alpha must be finite and > 2");
  if (!finite(mean_link_distance) || mean_link_distance <= 0.0)
    throw ValidationError("class_contention: mean_link_distance must be > 0");
  if (!finite(sir_threshold) || sir_threshold <= 0.0)
    throw ValidationError("class_contention: sir_threshold must be > 0");
  const double delta = 2.0 / alpha;
  return 4.0 * gamma_symmetric_product(delta) * mean_link_distance *
         mean_link_distance * std::pow(sir_threshold, delta);
}

DerivedConstants derive_constants(const NetworkConfig& config,
                                  std::size_t analyzed) {
  validate_config(config, AnalysisMode::SingleClass);
  if (analyzed >= config.size())
    throw ValidationError("derive_constants: analyzed class index " +
                          std::to_string(analyzed) + " out of range (N=" +
                          std::to_string(config.size()) + ")");

  DerivedConstants dc;
  dc.delta = 2.0 / config.alpha;
  dc.analyzed = analyzed;
  dc.phi.reserve(config.size());
  dc.power_delta.reserve(config.size());
  for (const TrafficClass& c : config.classes) {
    dc.phi.push_back(
        class_contention(config.alpha, c.mean_link_distance, c.sir_threshold));
    dc.power_delta.push_back(std::pow(c.power, dc.delta));
  }

  // Cross-class saturated interference, normalized by the analyzed class's
  // power; only power ratios enter, so global rescaling cancels.
  const double p_ref = dc.power_delta[analyzed];
  double zeta = 0.0;
  for (std::size_t m = 0; m < config.size(); ++m) {
    if (m == analyzed) continue;
    const TrafficClass& c = config.classes[m];
    zeta += (dc.power_delta[m] / p_ref) * c.lambda * c.access_prob;
  }
  dc.zeta = zeta;
  return dc;
}

}  // namespace aloha
