#pragma once

#include <stdexcept>
#include <string>

namespace langest {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A variance-function operation was requested on a stationary-flavor model
/// (or the other way round).
class FlavorError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or root finding did not reach its accuracy target.
class NumericsError : public Error {
 public:
  using Error::Error;
};

/// Gaussian synthesis failed (covariance not factorizable).
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// Input carries no information (e.g. an all-zero path).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Operation not available for this noise model.
class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

/// The squared autocovariance is not integrable on [0, inf).
class NonIntegrable : public Error {
 public:
  using Error::Error;
};

/// Too many replications of a Monte Carlo experiment failed.
class ExperimentError : public Error {
 public:
  using Error::Error;
};

/// The mean square lies outside the range of the variance map.
class EstimateOutOfRange : public Error {
 public:
  EstimateOutOfRange(const std::string& what, double value, double psi_at_lo,
                     double psi_at_hi)
      : Error(what), value_(value), psi_at_lo_(psi_at_lo), psi_at_hi_(psi_at_hi) {}

  double value() const noexcept { return value_; }
  /// psi at the smallest bracketed theta (the upper end of the attainable range).
  double psi_at_lo() const noexcept { return psi_at_lo_; }
  /// psi at the largest bracketed theta (the lower end of the attainable range).
  double psi_at_hi() const noexcept { return psi_at_hi_; }

 private:
  double value_;
  double psi_at_lo_;
  double psi_at_hi_;
};

}  // namespace langest
