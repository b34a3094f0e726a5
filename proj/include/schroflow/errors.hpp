#pragma once

#include <stdexcept>
#include <string>

namespace schroflow {

/// Input outside the mathematical domain of an operation (poles, negative radii, Hardy violations).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or under-resolved configuration (quadrature floors, schema errors, mismatched routes).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative or direct numerical method failed; carries the achieved residual when one exists.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Index outside a table or eigensystem.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace schroflow
