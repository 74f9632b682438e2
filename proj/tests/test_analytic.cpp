#include <cmath>
#include <numbers>

#include <doctest.h>

#include "aloha/analytic.hpp"
#include "aloha/errors.hpp"
#include "aloha/model.hpp"
#include "aloha/rng.hpp"
#include "support/random_configs.hpp"

using namespace aloha;

namespace {

// Single class with phi * lambda set exactly: lambda = 1 and Rbar chosen so
// phi = 4 * (pi/2) * Rbar^2 = value (alpha = 4, theta = 1).
NetworkConfig unit_class(double phi_lambda, double a, double p = 1.0) {
  NetworkConfig cfg;
  cfg.alpha = 4.0;
  TrafficClass c;
  c.lambda = 1.0;
  c.mean_link_distance = std::sqrt(phi_lambda / (2.0 * std::numbers::pi));
  c.sir_threshold = 1.0;
  c.arrival_rate = a;
  c.access_prob = p;
  cfg.classes = {c};
  return cfg;
}

}  // namespace

TEST_CASE("single class: bound, closure, success, delay at phi*lambda = 1") {
  const NetworkConfig cfg = unit_class(1.0, 0.25);
  const SingleClassResult r = single_class_analysis(cfg);
  CHECK(r.stability_bound == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(r.closure_bound == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(r.success_prob == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(r.mean_delay == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("single class: bound shrinks to 1/3 at phi*lambda = 2") {
  CHECK(single_class_bound(unit_class(2.0, 0.1)) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("single class with reduced access probability") {
  // p = 0.5, phi*lambda = 1: bound p/(1+phi*lambda*p) = 1/3; the closure
  // bound (attained at p = 1) stays 1/2.
  const NetworkConfig cfg = unit_class(1.0, 0.2, 0.5);
  CHECK(single_class_bound(cfg) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(single_class_closure_bound(cfg) == doctest::Approx(0.5).epsilon(1e-13));
  // Success is per-attempt: (1 - phi*lambda*a) / (1 + phi*zeta) = 0.8.
  CHECK(single_class_success(cfg) == doctest::Approx(0.8).epsilon(1e-13));
  // Delay (1-a)/(p*ps - a) = 0.8 / (0.4 - 0.2) = 4.
  CHECK(single_class_delay(cfg) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("single class with a saturated interfering class") {
  // Analyzed class as above; the other class transmits dummies at p = 0.5
  // with density 2 and equal power: zeta = 1.
  NetworkConfig cfg = unit_class(1.0, 0.25);
  TrafficClass other = cfg.classes[0];
  other.lambda = 2.0;
  other.access_prob = 0.5;
  other.arrival_rate = 0.0;
  other.mean_link_distance = 0.123;  // irrelevant to the analyzed class
  cfg.classes.push_back(other);

  CHECK(derive_constants(cfg, 0).zeta == doctest::Approx(1.0).epsilon(1e-13));
  // bound = 1 / (1 + phi*(lambda + zeta)) = 1/3.
  CHECK(single_class_bound(cfg, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  // ps = (1 - phi*lambda*a) / (1 + phi*zeta) = 0.75 / 2.
  CHECK(single_class_success(cfg, 0) == doctest::Approx(0.375).epsilon(1e-13));
  // D = (1 - a)/(p*ps - a) = 0.75 / 0.125 = 6.
  CHECK(single_class_delay(cfg, 0) == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("single class: the two delay forms agree") {
  RandomStream rng(0x1111u, 0);
  for (int i = 0; i < 100; ++i) {
    aloha::testing::RandomConfigOptions opt;
    opt.min_classes = opt.max_classes = 1;
    opt.require_stable = true;
    opt.margin_hi = 0.8;
    NetworkConfig cfg = aloha::testing::random_network(rng, opt);
    cfg.classes[0].access_prob = 0.3 + 0.7 * rng.uniform01();
    if (!(cfg.classes[0].arrival_rate < single_class_bound(cfg))) continue;
    const double a = cfg.classes[0].arrival_rate;
    const double p = cfg.classes[0].access_prob;
    const double ps = single_class_success(cfg);
    CHECK(single_class_delay(cfg) ==
          doctest::Approx((1.0 - a) / (p * ps - a)).epsilon(1e-11));
  }
}

TEST_CASE("single class: delay is minimized at full access") {
  const double a = 0.1;
  const NetworkConfig full = unit_class(1.0, a, 1.0);
  const double d_full = single_class_delay(full);
  for (double p : {0.3, 0.5, 0.7, 0.9, 0.99}) {
    const NetworkConfig cfg = unit_class(1.0, a, p);
    CHECK(d_full < single_class_delay(cfg));
  }
}

TEST_CASE("single class: instability is reported with the violated bound") {
  const NetworkConfig cfg = unit_class(1.0, 0.5);  // boundary: a == bound
  CHECK_THROWS_AS(single_class_success(cfg), InstabilityError);
  try {
    single_class_delay(cfg);
    FAIL("expected InstabilityError");
  } catch (const InstabilityError& e) {
    REQUIRE(e.bound().has_value());
    CHECK(*e.bound() == doctest::Approx(0.5).epsilon(1e-13));
    REQUIRE(e.violated_class().has_value());
    CHECK(*e.violated_class() == 0);
  }
}

TEST_CASE("stationary metrics: symmetric two-class oracle") {
  // Two identical classes with phi*lambda = 0.15 and a = 0.7:
  // ps = 1/(1 + 0.15*1.4/0.79) = 0.79, D = 0.3/0.09 = 10/3.
  NetworkConfig cfg;
  cfg.alpha = 4.0;
  TrafficClass c;
  c.lambda = 1.0;
  c.mean_link_distance = std::sqrt(0.15 / (2.0 * std::numbers::pi));
  c.sir_threshold = 1.0;
  c.arrival_rate = 0.7;
  cfg.classes = {c, c};

  const StationaryMetrics m = stationary_metrics(cfg);
  for (int n = 0; n < 2; ++n) {
    CHECK(m.success_prob[n] == doctest::Approx(0.79).epsilon(1e-13));
    CHECK(m.mean_delay[n] == doctest::Approx(10.0 / 3.0).epsilon(1e-13));
    CHECK(m.load[n] == doctest::Approx(0.7 / 0.79).epsilon(1e-13));
    CHECK(m.channel_share[n] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("stationary metrics: asymmetric two-class oracle") {
  // Class 0: phi = 1 (lambda = 1), P = 1, a = 0.3.
  // Class 1: phi = 0.5 (lambda = 1), P = 4 so P^delta = 2, a = 0.2.
  // Interference sum: (0.3 + 2*0.2) / (1 - (0.3 + 0.1)) = 7/6.
  NetworkConfig cfg;
  cfg.alpha = 4.0;
  TrafficClass c0, c1;
  c0.lambda = 1.0;
  c0.mean_link_distance = std::sqrt(1.0 / (2.0 * std::numbers::pi));
  c0.sir_threshold = 1.0;
  c0.arrival_rate = 0.3;
  c1.lambda = 1.0;
  c1.power = 4.0;
  c1.mean_link_distance = std::sqrt(0.5 / (2.0 * std::numbers::pi));
  c1.sir_threshold = 1.0;
  c1.arrival_rate = 0.2;
  cfg.classes = {c0, c1};

  const StationaryMetrics m = stationary_metrics(cfg);
  CHECK(m.success_prob[0] == doctest::Approx(6.0 / 13.0).epsilon(1e-13));
  CHECK(m.success_prob[1] == doctest::Approx(24.0 / 31.0).epsilon(1e-13));
  CHECK(m.mean_delay[0] == doctest::Approx(13.0 / 3.0).epsilon(1e-13));
  CHECK(m.mean_delay[1] == doctest::Approx(124.0 / 89.0).epsilon(1e-13));
  CHECK(m.channel_share[0] == doctest::Approx(3.9 / 7.0).epsilon(1e-12));
  CHECK(m.channel_share[1] == doctest::Approx(3.1 / 7.0).epsilon(1e-12));
}

TEST_CASE("stationary metrics: no traffic means instant service") {
  NetworkConfig cfg = unit_class(1.0, 0.0);
  cfg.classes.push_back(cfg.classes[0]);
  const StationaryMetrics m = stationary_metrics(cfg);
  for (int n = 0; n < 2; ++n) {
    CHECK(m.success_prob[n] == 1.0);
    CHECK(m.mean_delay[n] == 1.0);
    CHECK(m.load[n] == 0.0);
    CHECK(m.channel_share[n] == 0.0);
  }
}

TEST_CASE("stationary metrics: instability names class and critical rate") {
  // Two identical classes with phi*lambda = 1 and a = 0.4 violate the
  // region; the class-0 inequality caps a at 0.3 given the other class.
  NetworkConfig cfg = unit_class(1.0, 0.4);
  cfg.classes.push_back(cfg.classes[0]);
  try {
    stationary_metrics(cfg);
    FAIL("expected InstabilityError");
  } catch (const InstabilityError& e) {
    REQUIRE(e.violated_class().has_value());
    CHECK(*e.violated_class() == 0);
    REQUIRE(e.bound().has_value());
    CHECK(*e.bound() == doctest::Approx(0.3).epsilon(1e-12));
  }
}

TEST_CASE("channel shares sum to 1 and the pairwise invariant is flat") {
  RandomStream rng(0x2222u, 0);
  aloha::testing::RandomConfigOptions opt;
  opt.min_classes = 1;
  opt.max_classes = 4;
  opt.require_stable = true;
  opt.margin_hi = 0.7;
  for (int i = 0; i < 56; ++i) {
    const NetworkConfig cfg = aloha::testing::random_network(rng, opt);
    const StationaryMetrics m = stationary_metrics(cfg);
    const ShareResiduals res = share_identity_residuals(m, cfg);
    CHECK(res.sum_residual < 1e-10);
    CHECK(res.max_pairwise < 1e-9);
  }
}

TEST_CASE("physical form of the share identity") {
  CHECK(physical_identity_rhs(4.0) ==
        doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-13));

  RandomStream rng(0x3333u, 0);
  aloha::testing::RandomConfigOptions opt;
  opt.min_classes = 1;
  opt.max_classes = 3;
  // Powers cancel out of the identity entirely; spread them to prove it.
  opt.spread_powers = true;
  opt.require_stable = true;
  opt.margin_hi = 0.7;
  for (int i = 0; i < 40; ++i) {
    const NetworkConfig cfg = aloha::testing::random_network(rng, opt);
    const StationaryMetrics m = stationary_metrics(cfg);
    CHECK(std::fabs(physical_identity_lhs(cfg, m) -
                    physical_identity_rhs(cfg.alpha)) < 1e-9);
  }
}

TEST_CASE("zero-traffic identities are vacuous, not NaN") {
  NetworkConfig cfg = unit_class(1.0, 0.0);
  const StationaryMetrics m = stationary_metrics(cfg);
  const ShareResiduals res = share_identity_residuals(m, cfg);
  CHECK(res.sum_residual == 0.0);
  CHECK(res.max_pairwise == 0.0);
  CHECK(physical_identity_lhs(cfg, m) == 0.0);
}
