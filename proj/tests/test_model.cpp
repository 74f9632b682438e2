#include <cmath>
#include <numbers>
#include <string>

#include <doctest.h>

#include "aloha/config_io.hpp"
#include "aloha/errors.hpp"
#include "aloha/model.hpp"

using namespace aloha;

namespace {

NetworkConfig one_class(double lambda = 1.0, double rbar = 0.5,
                        double theta = 1.0, double a = 0.2, double p = 1.0) {
  NetworkConfig cfg;
  cfg.alpha = 4.0;
  TrafficClass c;
  c.lambda = lambda;
  c.mean_link_distance = rbar;
  c.sir_threshold = theta;
  c.arrival_rate = a;
  c.access_prob = p;
  cfg.classes = {c};
  return cfg;
}

std::string error_message(const NetworkConfig& cfg, AnalysisMode mode) {
  try {
    validate_config(cfg, mode);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("validation accepts a sound config") {
  CHECK_NOTHROW(validate_config(one_class(), AnalysisMode::SingleClass));
  CHECK_NOTHROW(validate_config(one_class(), AnalysisMode::MultiClass));
}

TEST_CASE("validation reports every violation at once") {
  NetworkConfig cfg = one_class();
  cfg.alpha = 1.5;
  cfg.classes[0].lambda = -3.0;
  cfg.classes[0].arrival_rate = 1.0;
  const std::string msg = error_message(cfg, AnalysisMode::SingleClass);
  CHECK(msg.find("alpha must be finite and > 2") != std::string::npos);
  CHECK(msg.find("classes[0].lambda") != std::string::npos);
  CHECK(msg.find("classes[0].arrival_rate") != std::string::npos);
}

TEST_CASE("validation enforces per-field ranges") {
  auto rejects = [](NetworkConfig cfg) {
    CHECK_THROWS_AS(validate_config(cfg, AnalysisMode::SingleClass),
                    ValidationError);
  };
  NetworkConfig cfg = one_class();
  cfg.classes[0].arrival_rate = 1.0;  // must stay strictly below 1
  rejects(cfg);
  cfg = one_class();
  cfg.classes[0].access_prob = 0.0;  // must be strictly positive
  rejects(cfg);
  cfg = one_class();
  cfg.classes[0].access_prob = 1.5;
  rejects(cfg);
  cfg = one_class();
  cfg.classes[0].sir_threshold = 0.0;
  rejects(cfg);
  cfg = one_class();
  cfg.classes[0].power = -1.0;
  rejects(cfg);
  cfg = one_class();
  cfg.classes.clear();
  rejects(cfg);
  cfg = one_class();
  cfg.alpha = 2.0;  // boundary excluded
  rejects(cfg);
}

TEST_CASE("multi-class mode insists on access probability 1") {
  NetworkConfig cfg = one_class();
  cfg.classes[0].access_prob = 0.5;
  CHECK_NOTHROW(validate_config(cfg, AnalysisMode::SingleClass));
  const std::string msg = error_message(cfg, AnalysisMode::MultiClass);
  CHECK(msg.find("access_prob must be 1 for multi-class analysis") !=
        std::string::npos);
  CHECK(msg.find("classes[0]") != std::string::npos);
}

TEST_CASE("contention constant: center value and scalings") {
  // alpha = 4, Rbar = 0.5, theta = 1:
  // 4 * Gamma(1.5)Gamma(0.5) * 0.25 = Gamma(1.5)Gamma(0.5) = pi/2.
  CHECK(class_contention(4.0, 0.5, 1.0) ==
        doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-13));
  // Quadratic in the mean link distance.
  CHECK(class_contention(4.0, 1.0, 1.0) ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-13));
  // theta enters through theta^(2/alpha): theta = 16, alpha = 4 -> factor 4.
  CHECK(class_contention(4.0, 0.5, 16.0) ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-13));
  CHECK_THROWS_AS(class_contention(2.0, 0.5, 1.0), ValidationError);
  CHECK_THROWS_AS(class_contention(4.0, 0.0, 1.0), ValidationError);
}

TEST_CASE("derived constants: delta, phi, zeta") {
  NetworkConfig cfg;
  cfg.alpha = 4.0;
  TrafficClass c0, c1;
  c0.lambda = 2.0;
  c0.power = 1.0;
  c0.mean_link_distance = 0.5;
  c0.sir_threshold = 1.0;
  c0.access_prob = 1.0;
  c1.lambda = 3.0;
  c1.power = 4.0;
  c1.mean_link_distance = 0.25;
  c1.sir_threshold = 1.0;
  c1.access_prob = 0.5;
  cfg.classes = {c0, c1};

  const DerivedConstants d0 = derive_constants(cfg, 0);
  CHECK(d0.delta == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d0.phi[0] == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-13));
  CHECK(d0.phi[1] == doctest::Approx(std::numbers::pi / 8.0).epsilon(1e-13));
  CHECK(d0.power_delta[1] == doctest::Approx(2.0).epsilon(1e-13));
  // zeta for class 0: (P_1/P_0)^delta * lambda_1 * p_1 = 2 * 3 * 0.5 = 3.
  CHECK(d0.zeta == doctest::Approx(3.0).epsilon(1e-13));

  const DerivedConstants d1 = derive_constants(cfg, 1);
  // zeta for class 1: (1/4)^0.5 * 2 * 1 = 1.
  CHECK(d1.zeta == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_AS(derive_constants(cfg, 2), ValidationError);
}

TEST_CASE("zeta is invariant under common power rescaling") {
  NetworkConfig cfg;
  cfg.alpha = 3.1;
  TrafficClass c0, c1, c2;
  c0.lambda = 1.0; c0.power = 0.7; c0.mean_link_distance = 0.3; c0.sir_threshold = 2.0;
  c1.lambda = 2.0; c1.power = 1.9; c1.mean_link_distance = 0.2; c1.sir_threshold = 0.5;
  c2.lambda = 0.4; c2.power = 5.0; c2.mean_link_distance = 0.6; c2.sir_threshold = 1.0;
  cfg.classes = {c0, c1, c2};
  const double zeta_before = derive_constants(cfg, 1).zeta;
  for (TrafficClass& c : cfg.classes) c.power *= 37.5;
  CHECK(derive_constants(cfg, 1).zeta ==
        doctest::Approx(zeta_before).epsilon(1e-13));
}

TEST_CASE("config JSON round trip preserves every field") {
  NetworkConfig cfg;
  cfg.alpha = 3.7;
  TrafficClass c0, c1;
  c0.lambda = 1.25; c0.power = 2.0; c0.mean_link_distance = 0.4;
  c0.sir_threshold = 1.5; c0.arrival_rate = 0.3; c0.access_prob = 0.8;
  c1.lambda = 0.5; c1.power = 1.0; c1.mean_link_distance = 0.7;
  c1.sir_threshold = 0.9; c1.arrival_rate = 0.0; c1.access_prob = 1.0;
  cfg.classes = {c0, c1};

  const NetworkConfig back = config_from_json(config_to_json(cfg));
  REQUIRE(back.size() == 2);
  CHECK(back.alpha == cfg.alpha);
  for (std::size_t n = 0; n < 2; ++n) {
    CHECK(back.classes[n].lambda == cfg.classes[n].lambda);
    CHECK(back.classes[n].power == cfg.classes[n].power);
    CHECK(back.classes[n].mean_link_distance == cfg.classes[n].mean_link_distance);
    CHECK(back.classes[n].sir_threshold == cfg.classes[n].sir_threshold);
    CHECK(back.classes[n].arrival_rate == cfg.classes[n].arrival_rate);
    CHECK(back.classes[n].access_prob == cfg.classes[n].access_prob);
  }
}

TEST_CASE("config JSON parses the documented schema") {
  const char* text = R"({
    "alpha": 4.0,
    "classes": [
      {"lambda": 1.0, "power": 1.0, "mean_link_distance": 0.5,
       "sir_threshold": 1.0, "arrival_rate": 0.2, "access_prob": 1.0}
    ]
  })";
  const NetworkConfig cfg = config_from_json(text);
  CHECK(cfg.alpha == 4.0);
  REQUIRE(cfg.size() == 1);
  CHECK(cfg.classes[0].mean_link_distance == 0.5);
  CHECK(cfg.classes[0].arrival_rate == 0.2);
}

TEST_CASE("config JSON rejects malformed input") {
  auto message_of = [](const char* text) {
    try {
      config_from_json(text);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string{};
  };

  CHECK(message_of("{").find("parse error") != std::string::npos);
  CHECK(message_of("[1, 2]").find("top level") != std::string::npos);
  CHECK(message_of(R"({"alpha": 4.0, "classes": [], "extra": 1})")
            .find("unknown field \"extra\"") != std::string::npos);
  CHECK(message_of(R"({"classes": [{"lambda": 1, "power": 1,
        "mean_link_distance": 0.5, "sir_threshold": 1, "arrival_rate": 0.1,
        "access_prob": 1}]})")
            .find("missing field \"alpha\"") != std::string::npos);
  CHECK(message_of(R"({"alpha": "four", "classes": []})")
            .find("must be a number") != std::string::npos);
  CHECK(message_of(R"({"alpha": 4.0, "classes": []})")
            .find("non-empty") != std::string::npos);
  CHECK(message_of(R"({"alpha": 4.0, "classes": [{"lambda": 1, "power": 1,
        "mean_link_distance": 0.5, "sir_threshold": 1, "arrival_rate": 0.1,
        "access_prob": 1, "color": "red"}]})")
            .find("unknown field \"color\"") != std::string::npos);
  CHECK(message_of(R"({"alpha": 4.0, "classes": [{"lambda": 1,
        "mean_link_distance": 0.5, "sir_threshold": 1, "arrival_rate": 0.1,
        "access_prob": 1}]})")
            .find("missing field \"power\"") != std::string::npos);
  // Parsed values still go through range validation.
  CHECK(message_of(R"({"alpha": 4.0, "classes": [{"lambda": -1, "power": 1,
        "mean_link_distance": 0.5, "sir_threshold": 1, "arrival_rate": 0.1,
        "access_prob": 1}]})")
            .find("lambda must be finite and > 0") != std::string::npos);
}
