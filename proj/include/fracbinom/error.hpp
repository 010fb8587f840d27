#pragma once

#include <stdexcept>
#include <string>

namespace fracbinom {

// Argument outside the documented domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Floating-point evaluation failed a consistency check (overflow, residual
// imaginary part, non-positive result where positivity is guaranteed).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature did not reach its tolerance.
class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double error_estimate)
      : NumericalError(what), error_estimate_(error_estimate) {}

  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double error_estimate_;
};

}  // namespace fracbinom
