#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace aloha {

// Malformed input: parameter out of range, bad JSON, inconsistent sizes.
// The message lists every violation found, not just the first.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A closed-form evaluation was requested outside the stability region,
// where the stationary quantities do not exist.
class InstabilityError : public std::runtime_error {
public:
  explicit InstabilityError(const std::string& msg,
                            std::optional<std::size_t> violated_class = {},
                            std::optional<double> bound = {})
      : std::runtime_error(msg), violated_class_(violated_class), bound_(bound) {}

  // Index of (one of) the classes whose rate inequality fails, when known.
  std::optional<std::size_t> violated_class() const { return violated_class_; }
  // The strict bound that the offending arrival rate breaks, when known.
  std::optional<double> bound() const { return bound_; }

private:
  std::optional<std::size_t> violated_class_;
  std::optional<double> bound_;
};

// No choice of transmit powers can stabilize the requested operating point.
class InfeasibleError : public std::runtime_error {
public:
  explicit InfeasibleError(const std::string& msg, double margin = 0.0)
      : std::runtime_error(msg), margin_(margin) {}

  // Value of the power-free feasibility sum (stabilizable iff < 1).
  double margin() const { return margin_; }

private:
  double margin_;
};

// A simulated queue exceeded the configured hard cap.
class QueueOverflowError : public std::runtime_error {
public:
  explicit QueueOverflowError(const std::string& msg, std::size_t class_index,
                              long long slot)
      : std::runtime_error(msg), class_index_(class_index), slot_(slot) {}

  std::size_t class_index() const { return class_index_; }
  long long slot() const { return slot_; }

private:
  std::size_t class_index_;
  long long slot_;
};

}  // namespace aloha
