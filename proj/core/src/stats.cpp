#include "aloha/stats.hpp"

#include <cmath>
#include <cstddef>

#include "aloha/errors.hpp"

namespace aloha {

double t_quantile_975(int df) {
  if (df < 1) throw ValidationError("t_quantile_975: df must be >= 1");
  static constexpr double table[30] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df <= 30) return table[df - 1];
  // Cornish-Fisher expansion around the normal quantile; relative error is
  // below 2e-4 for df > 30.
  const double z = 1.959963984540054;
  const double z3 = z * z * z;
  const double z5 = z3 * z * z;
  const double nu = static_cast<double>(df);
  return z + (z3 + z) / (4.0 * nu) + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * nu * nu);
}

Estimate t_confidence(const std::vector<double>& xs) {
  Estimate e;
  e.samples = static_cast<int>(xs.size());
  if (xs.empty()) return e;
  double sum = 0.0;
  for (double x : xs) sum += x;
  e.value = sum / static_cast<double>(xs.size());
  e.defined = true;
  if (xs.size() < 2) return e;
  double ss = 0.0;
  for (double x : xs) ss += (x - e.value) * (x - e.value);
  const double n = static_cast<double>(xs.size());
  const double stderr_mean = std::sqrt(ss / (n - 1.0) / n);
  e.ci_half = t_quantile_975(static_cast<int>(xs.size()) - 1) * stderr_mean;
  e.has_ci = true;
  return e;
}

WilsonInterval wilson95(std::int64_t successes, std::int64_t trials) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw ValidationError("wilson95: need 0 <= successes <= trials, trials > 0");
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double center = (p + z * z / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

double ls_slope(const std::vector<double>& y, double dx) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const double xbar = 0.5 * static_cast<double>(n - 1);
  double ybar = 0.0;
  for (double v : y) ybar += v;
  ybar /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(i) - xbar;
    sxy += d * (y[i] - ybar);
    sxx += d * d;
  }
  return sxy / sxx / dx;
}

}  // namespace aloha
