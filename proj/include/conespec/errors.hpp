#pragma once

#include <stdexcept>
#include <string>

namespace conespec {

// Argument outside the domain of a function (z <= 0, nu < 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Result not representable in double precision.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// Positivity of the cross-section operator violated, or a zero resonance
// was detected. Carries the offending value (lowest eigenvalue, or the
// ratio |a|/|b| for resonances).
class HypothesisError : public std::runtime_error {
 public:
  HypothesisError(const std::string& what, double value)
      : std::runtime_error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

// Iterative method failed to reach the requested accuracy. `achieved`
// reports the best bound or residual reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// Invalid user configuration (bad key, bad value, inconsistent numerics).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conespec
