#pragma once

#include <stdexcept>
#include <string>

namespace kinspec {

/// Raised when an operator would push coefficients past the degree cutoff.
class TruncationError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Raised when adaptive quadrature cannot reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double value, double error_estimate)
      : std::runtime_error(what + " (value " + std::to_string(value) + ", error estimate " +
                           std::to_string(error_estimate) + ")"),
        value_(value),
        error_estimate_(error_estimate) {}

  double value() const noexcept { return value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

/// Raised when two independent evaluation routes disagree beyond tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kinspec
