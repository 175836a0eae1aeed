#pragma once

#include <stdexcept>
#include <string>

namespace reluland {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the set on which the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// A polynomial that must be nonzero vanishes identically.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// The risk is not twice differentiable at the requested parameter vector.
class NonSmoothPointError : public Error {
 public:
  using Error::Error;
};

/// Classification was requested at a point whose gradient is not small.
class NotCriticalError : public Error {
 public:
  using Error::Error;
};

/// The two-kink witness could not be built for the requested half-width.
class WitnessError : public Error {
 public:
  using Error::Error;
};

/// Enumeration requires a piecewise-polynomial target.
class FinitenessError : public Error {
 public:
  using Error::Error;
};

/// Malformed target/parameter files.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace reluland
