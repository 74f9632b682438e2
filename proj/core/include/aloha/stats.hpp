#pragma once

#include <cstdint>
#include <vector>

namespace aloha {

// A point estimate with an optional symmetric 95% confidence half-width.
struct Estimate {
  double value = 0.0;
  double ci_half = 0.0;
  int samples = 0;       // replications that contributed data
  bool defined = false;  // false when nothing was observed (e.g. no departures)
  bool has_ci = false;   // false with fewer than 2 contributing replications

  double lo() const { return value - ci_half; }
  double hi() const { return value + ci_half; }
  bool contains(double x) const {
    return defined && has_ci && lo() <= x && x <= hi();
  }
};

// Two-sided 97.5% Student-t quantile (the multiplier for 95% CIs). Exact
// table for df <= 30, Cornish-Fisher expansion beyond.
double t_quantile_975(int df);

// Mean and 95% t-interval of the given replication values.
Estimate t_confidence(const std::vector<double>& xs);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson95(std::int64_t successes, std::int64_t trials);

// Least-squares slope of y against x_i = i * dx. Returns 0 for fewer than
// two points.
double ls_slope(const std::vector<double>& y, double dx);

}  // namespace aloha
