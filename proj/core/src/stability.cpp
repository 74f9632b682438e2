#include "aloha/stability.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "aloha/errors.hpp"

namespace aloha {
namespace {

// Shared precomputation: x_n = (phi_n/P_n^delta) * a_n/(1-a_n) plus the
// interference sums entering every region inequality.
struct RegionTerms {
  DerivedConstants dc;
  std::vector<double> x;        // per-class left-hand side
  std::vector<double> pl;       // P_n^delta * lambda_n
  std::vector<double> pla;      // P_n^delta * lambda_n * a_n
  std::vector<double> phila;    // phi_n * lambda_n * a_n
  double sum_pla = 0.0;
  double sum_phila = 0.0;
  double sum_pl = 0.0;
};

RegionTerms region_terms(const NetworkConfig& config) {
  RegionTerms t;
  t.dc = derive_constants(config);
  const std::size_t n_classes = config.size();
  t.x.resize(n_classes);
  t.pl.resize(n_classes);
  t.pla.resize(n_classes);
  t.phila.resize(n_classes);
  for (std::size_t n = 0; n < n_classes; ++n) {
    const TrafficClass& c = config.classes[n];
    t.x[n] = (t.dc.phi[n] / t.dc.power_delta[n]) * c.arrival_rate /
             (1.0 - c.arrival_rate);
    t.pl[n] = t.dc.power_delta[n] * c.lambda;
    t.pla[n] = t.pl[n] * c.arrival_rate;
    t.phila[n] = t.dc.phi[n] * c.lambda * c.arrival_rate;
    t.sum_pla += t.pla[n];
    t.sum_phila += t.phila[n];
    t.sum_pl += t.pl[n];
  }
  return t;
}

}  // namespace

const char* stability_method_name(StabilityMethod m) {
  switch (m) {
    case StabilityMethod::Region: return "rate-region";
    case StabilityMethod::Permutation: return "permutation-region";
    case StabilityMethod::Feasibility: return "power-free-feasibility";
  }
  return "unknown";
}

StabilityVerdict check_region(const NetworkConfig& config) {
  validate_config(config, AnalysisMode::MultiClass);
  const RegionTerms t = region_terms(config);

  StabilityVerdict v;
  v.method = StabilityMethod::Region;
  if (t.sum_pla == 0.0) {  // no traffic anywhere
    v.stable = true;
    return v;
  }

  v.stable = true;
  for (std::size_t n = 0; n < config.size(); ++n) {
    // First form: sums over all classes.
    const bool form1 = t.x[n] * t.sum_pla < 1.0 - t.sum_phila;
    // Second form: sums excluding n, with the class's own saturated
    // interference P_n^delta*lambda_n isolated in the denominator.
    const double denom2 = t.sum_pla - t.pla[n] + t.pl[n];
    const double num2 = 1.0 - (t.sum_phila - t.phila[n]);
    const bool form2 = t.x[n] * denom2 < num2;
    // The two forms are algebraically identical (x_n*denom2 - num2 equals
    // x_n*sum_pla - (1 - sum_phila) exactly); disagreement would mean a
    // broken evaluation, not a borderline config.
    if (form1 != form2)
      throw std::logic_error(
          "check_region: the two region-inequality forms disagree");
    if (!form1) {
      v.stable = false;
      v.violated_class = n;
      break;
    }
  }
  return v;
}

StabilityVerdict check_permutation_region(const NetworkConfig& config,
                                          std::size_t max_classes) {
  validate_config(config, AnalysisMode::MultiClass);
  if (config.size() > max_classes)
    throw ValidationError(
        "check_permutation_region: N = " + std::to_string(config.size()) +
        " exceeds the permutation-search cap " + std::to_string(max_classes) +
        "; use check_region instead");
  const RegionTerms t = region_terms(config);

  StabilityVerdict v;
  v.method = StabilityMethod::Permutation;

  std::vector<std::size_t> perm(config.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool all_hold = true;
    double settled_phila = 0.0;  // sum over already-settled classes
    double settled_pla = 0.0;
    double saturated_pl = t.sum_pl;  // classes not yet settled, full rate
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
      const std::size_t n = perm[pos];
      const double num = 1.0 - settled_phila;
      const double den = settled_pla + saturated_pl;
      if (!(t.x[n] * den < num)) {
        all_hold = false;
        break;
      }
      settled_phila += t.phila[n];
      settled_pla += t.pla[n];
      saturated_pl -= t.pl[n];
    }
    if (all_hold) {
      v.stable = true;
      v.witness_permutation = perm;
      return v;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  v.stable = false;
  return v;
}

DominantSequenceReport dominant_sequence_check(const NetworkConfig& config,
                                               std::vector<std::size_t> order) {
  validate_config(config, AnalysisMode::MultiClass);
  {
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> expect(config.size());
    std::iota(expect.begin(), expect.end(), 0);
    if (sorted != expect)
      throw ValidationError(
          "dominant_sequence_check: order must be a permutation of all class "
          "indices");
  }
  const RegionTerms t = region_terms(config);

  DominantSequenceReport report;
  report.order = order;

  double settled_phila = 0.0;
  double settled_pla = 0.0;
  double saturated_pl = t.sum_pl;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t n = order[pos];
    DominantStep step;
    step.class_index = n;
    step.arrival_rate = config.classes[n].arrival_rate;

    const double num = 1.0 - settled_phila;
    const double den = settled_pla + saturated_pl;
    step.denominator_ok = num > 0.0;
    if (step.denominator_ok) {
      // Threshold on a_n solving (phi/P^delta) a/(1-a) < num/den.
      const double u = (t.dc.power_delta[n] / t.dc.phi[n]) * num / den;
      step.threshold = u / (1.0 + u);
      step.holds = t.x[n] * den < num;
      // Success probabilities of the previously settled classes while the
      // remaining ones are saturated.
      step.settled_success.reserve(pos);
      for (std::size_t q = 0; q < pos; ++q) {
        const std::size_t k = order[q];
        step.settled_success.push_back(
            1.0 /
            (1.0 + (t.dc.phi[k] / t.dc.power_delta[k]) * den / num));
      }
    } else {
      step.threshold = 0.0;
      step.holds = false;
    }
    report.steps.push_back(std::move(step));

    settled_phila += t.phila[n];
    settled_pla += t.pla[n];
    saturated_pl -= t.pl[n];
  }

  if (report.all_hold()) {
    // Everything settled: the same closed form with no saturated classes
    // left, i.e. the stationary success probabilities of the full network.
    const double num = 1.0 - t.sum_phila;
    report.final_success.reserve(config.size());
    for (std::size_t k = 0; k < config.size(); ++k)
      report.final_success.push_back(
          1.0 / (1.0 + (t.dc.phi[k] / t.dc.power_delta[k]) * t.sum_pla / num));
  }
  return report;
}

double feasibility_margin(const NetworkConfig& config) {
  validate_config(config, AnalysisMode::MultiClass);
  const DerivedConstants dc = derive_constants(config);
  double sum = 0.0;
  for (std::size_t n = 0; n < config.size(); ++n) {
    const TrafficClass& c = config.classes[n];
    sum += dc.phi[n] * c.lambda * c.arrival_rate / (1.0 - c.arrival_rate);
  }
  return sum;
}

bool feasibility_over_powers(const NetworkConfig& config) {
  return feasibility_margin(config) < 1.0;
}

}  // namespace aloha
