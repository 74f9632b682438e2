#include "aloha/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aloha/analytic.hpp"
#include "aloha/errors.hpp"
#include "aloha/rng.hpp"
#include "aloha/stability.hpp"

namespace aloha {
namespace {

void validate_weights(const NetworkConfig& config, const DelayWeights& weights) {
  if (weights.c.size() != config.size())
    throw ValidationError("delay weights: expected " +
                          std::to_string(config.size()) + " entries, got " +
                          std::to_string(weights.c.size()));
  for (std::size_t n = 0; n < weights.c.size(); ++n)
    if (!std::isfinite(weights.c[n]) || weights.c[n] <= 0.0)
      throw ValidationError("delay weights: c[" + std::to_string(n) +
                            "] must be finite and > 0");
}

void require_feasible(const NetworkConfig& config) {
  const double margin = feasibility_margin(config);
  if (!(margin < 1.0))
    throw InfeasibleError(
        "no transmit-power vector can stabilize these arrival rates: "
        "feasibility sum " +
            std::to_string(margin) + " is not < 1",
        margin);
}

// The closed form divides by every arrival rate, and an idle class's delay
// depends only on its own power, which would make pricing it degenerate; the
// optimization therefore requires every class to carry traffic.
void require_all_active(const NetworkConfig& config) {
  for (std::size_t n = 0; n < config.size(); ++n)
    if (config.classes[n].arrival_rate == 0.0)
      throw ValidationError("optimal powers need every class to carry traffic: "
                            "class " +
                            std::to_string(n) + " has arrival_rate 0");
}

// Objective sum_n c_n D_n for the given powers, without the stability
// gatekeeping of stationary_metrics: returns +inf-like penalties outside the
// region so a numeric optimizer can navigate back in.
double raw_objective(const NetworkConfig& config, const DelayWeights& weights,
                     const std::vector<double>& powers,
                     const DerivedConstants& base) {
  const double delta = base.delta;
  double sum_pla = 0.0;
  double sum_phila = 0.0;
  std::vector<double> pdelta(config.size());
  for (std::size_t n = 0; n < config.size(); ++n) {
    const TrafficClass& c = config.classes[n];
    pdelta[n] = std::pow(powers[n], delta);
    sum_pla += pdelta[n] * c.lambda * c.arrival_rate;
    sum_phila += base.phi[n] * c.lambda * c.arrival_rate;
  }
  // 1 - sum_phila > 0 is implied by feasibility (checked by callers); the
  // power-dependent failure mode is p_s dropping to the arrival rate.
  const double interference = sum_pla / (1.0 - sum_phila);
  double objective = 0.0;
  double violation = 0.0;
  for (std::size_t n = 0; n < config.size(); ++n) {
    const TrafficClass& c = config.classes[n];
    const double ps = 1.0 / (1.0 + (base.phi[n] / pdelta[n]) * interference);
    if (ps <= c.arrival_rate) {
      violation += c.arrival_rate - ps;
      continue;
    }
    objective += weights.c[n] * (1.0 - c.arrival_rate) / (ps - c.arrival_rate);
  }
  if (violation > 0.0) return 1e12 * (1.0 + violation);
  return objective;
}

struct NelderMeadResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  bool converged = false;
};

// Standard Nelder-Mead on m dimensions (reflection 1, expansion 2,
// contraction 0.5, shrink 0.5).
template <typename F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, double step,
                             int max_iterations, double x_tol, double f_tol) {
  const std::size_t m = x0.size();
  std::vector<std::vector<double>> xs(m + 1, x0);
  for (std::size_t i = 0; i < m; ++i) xs[i + 1][i] += step;
  std::vector<double> fs(m + 1);
  for (std::size_t i = 0; i <= m; ++i) fs[i] = f(xs[i]);

  std::vector<std::size_t> idx(m + 1);
  NelderMeadResult result;
  for (int it = 0; it < max_iterations; ++it) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&fs](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = idx[0];
    const std::size_t worst = idx[m];
    const std::size_t second_worst = idx[m == 0 ? 0 : m - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= m; ++i)
      for (std::size_t d = 0; d < m; ++d)
        diameter = std::max(diameter, std::abs(xs[i][d] - xs[best][d]));
    const double spread = std::abs(fs[worst] - fs[best]);
    if (diameter < x_tol && spread <= f_tol * (1.0 + std::abs(fs[best]))) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(m, 0.0);
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < m; ++d) centroid[d] += xs[i][d];
    }
    for (double& v : centroid) v /= static_cast<double>(m);

    auto blend = [&](double t) {
      std::vector<double> x(m);
      for (std::size_t d = 0; d < m; ++d)
        x[d] = centroid[d] + t * (centroid[d] - xs[worst][d]);
      return x;
    };

    std::vector<double> xr = blend(1.0);
    const double fr = f(xr);
    if (fr < fs[best]) {
      std::vector<double> xe = blend(2.0);
      const double fe = f(xe);
      if (fe < fr) {
        xs[worst] = std::move(xe);
        fs[worst] = fe;
      } else {
        xs[worst] = std::move(xr);
        fs[worst] = fr;
      }
    } else if (fr < fs[second_worst]) {
      xs[worst] = std::move(xr);
      fs[worst] = fr;
    } else {
      std::vector<double> xc = blend(fr < fs[worst] ? 0.5 : -0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[worst])) {
        xs[worst] = std::move(xc);
        fs[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= m; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < m; ++d)
            xs[i][d] = xs[best][d] + 0.5 * (xs[i][d] - xs[best][d]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= m; ++i)
    if (fs[i] < fs[best]) best = i;
  result.x = xs[best];
  result.f = fs[best];
  return result;
}

}  // namespace

PowerAllocation optimal_powers(const NetworkConfig& config,
                               const DelayWeights& weights) {
  validate_config(config, AnalysisMode::MultiClass);
  validate_weights(config, weights);
  require_all_active(config);
  require_feasible(config);

  const DerivedConstants dc = derive_constants(config);

  PowerAllocation alloc;
  alloc.powers.assign(config.size(), 1.0);

  double margin = 0.0;       // sum_k phi_k lambda_k a_k/(1-a_k)
  double sqrt_weight = 0.0;  // sum_k sqrt(c_k phi_k lambda_k a_k/(1-a_k))
  for (std::size_t n = 0; n < config.size(); ++n) {
    const TrafficClass& c = config.classes[n];
    const double odds = c.arrival_rate / (1.0 - c.arrival_rate);
    margin += dc.phi[n] * c.lambda * odds;
    sqrt_weight += std::sqrt(weights.c[n] * dc.phi[n] * c.lambda * odds);
  }
  for (std::size_t n = 0; n < config.size(); ++n) {
    const TrafficClass& c = config.classes[n];
    const double odds = c.arrival_rate / (1.0 - c.arrival_rate);
    const double p_delta =
        dc.phi[n] * odds / (1.0 - margin) +
        std::sqrt(weights.c[n] * dc.phi[n] /
                  (c.lambda * c.arrival_rate * (1.0 - c.arrival_rate))) /
            sqrt_weight;
    alloc.powers[n] = std::pow(p_delta, 1.0 / dc.delta);
  }
  const double gauge = alloc.powers.back();
  for (double& p : alloc.powers) p /= gauge;

  NetworkConfig tuned = config;
  for (std::size_t n = 0; n < config.size(); ++n)
    tuned.classes[n].power = alloc.powers[n];
  const StationaryMetrics metrics = stationary_metrics(tuned);
  for (std::size_t n = 0; n < config.size(); ++n)
    alloc.objective += weights.c[n] * metrics.mean_delay[n];
  return alloc;
}

PowerAllocation numeric_power_oracle(const NetworkConfig& config,
                                     const DelayWeights& weights,
                                     const OracleOptions& options) {
  validate_config(config, AnalysisMode::MultiClass);
  validate_weights(config, weights);
  require_all_active(config);
  require_feasible(config);
  if (options.starts < 1)
    throw ValidationError("oracle options: starts must be >= 1");

  const DerivedConstants dc = derive_constants(config);

  PowerAllocation alloc;
  alloc.powers.assign(config.size(), 1.0);

  if (config.size() < 2) {
    // Nothing to optimize: with one class only the overall power scale is
    // left, which the objective is invariant to.
    NetworkConfig tuned = config;
    tuned.classes[0].power = 1.0;
    const StationaryMetrics metrics = stationary_metrics(tuned);
    alloc.objective = weights.c[0] * metrics.mean_delay[0];
    return alloc;
  }

  // Free coordinates: log powers of every class but the last, which is
  // pinned to power 1 (the gauge).
  const std::size_t m = config.size() - 1;
  auto to_powers = [&](const std::vector<double>& x) {
    std::vector<double> powers(config.size(), 1.0);
    for (std::size_t i = 0; i < m; ++i) powers[i] = std::exp(x[i]);
    return powers;
  };
  auto objective = [&](const std::vector<double>& x) {
    return raw_objective(config, weights, to_powers(x), dc);
  };

  NelderMeadResult best;
  bool any_converged = false;
  RandomStream rng(options.seed, 0);
  for (int s = 0; s < options.starts; ++s) {
    std::vector<double> x0(m, 0.0);
    if (s > 0)
      for (double& v : x0) v = -3.0 + 6.0 * rng.uniform01();
    NelderMeadResult r =
        nelder_mead(objective, std::move(x0), 0.5, options.max_iterations,
                    options.x_tolerance, options.f_tolerance);
    any_converged = any_converged || r.converged;
    if (r.f < best.f) best = std::move(r);
  }

  alloc.powers = to_powers(best.x);
  alloc.objective = best.f;
  if (!any_converged)
    throw OracleConvergenceError(
        "numeric power oracle: no start converged within its iteration "
        "budget",
        alloc);
  return alloc;
}

RateEnvelope max_d2d_rate(const NetworkConfig& config, std::size_t d2d,
                          std::size_t cell, double d1_max, double d2_max) {
  validate_config(config, AnalysisMode::MultiClass);
  if (d2d >= config.size() || cell >= config.size())
    throw ValidationError("max_d2d_rate: class index out of range");
  if (d2d == cell)
    throw ValidationError("max_d2d_rate: d2d and cell classes must differ");
  if (!(d1_max > 1.0) || !(d2_max > 1.0))
    throw ValidationError("max_d2d_rate: delay caps must be > 1 slot");

  const DerivedConstants dc = derive_constants(config);
  const TrafficClass& c_cell = config.classes[cell];
  const double phila_d = dc.phi[d2d] * config.classes[d2d].lambda;
  const double phila_c = dc.phi[cell] * c_cell.lambda;

  RateEnvelope env;
  env.psi2_star = phila_c * (d2_max / (d2_max - 1.0)) * c_cell.arrival_rate /
                  (1.0 - c_cell.arrival_rate);
  if (!(env.psi2_star < 1.0))
    throw InfeasibleError(
        "cellular class saturates the channel: its share at the delay cap is " +
            std::to_string(env.psi2_star) + " (needs < 1)",
        env.psi2_star);

  env.max_a1 =
      1.0 / (1.0 + phila_d * (d1_max / (d1_max - 1.0)) / (1.0 - env.psi2_star));
  env.power_ratio =
      (env.psi2_star / phila_c + 1.0 / (d2_max - 1.0)) /
      ((1.0 - env.psi2_star) / phila_d + 1.0 / (d1_max - 1.0));
  return env;
}

}  // namespace aloha
