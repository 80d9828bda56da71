#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace xroads {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One or more violated scenario invariants. Each issue reads
// "<field>: <problem>", e.g. "channel.m: non-integer Nakagami m (2.5)".
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues);

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// Malformed or unknown configuration input (before scenario validation).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An argument outside the mathematical domain of an operation (e.g. s < 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A closed form was requested for a path-loss exponent it does not cover.
class UnsupportedExponent : public Error {
 public:
  using Error::Error;
};

// Quadrature failed to converge, or a probability left [0, 1] by more than
// floating-point drift.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double achieved_tolerance)
      : Error(what), achieved_tolerance_(achieved_tolerance) {}

  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

}  // namespace xroads
