#pragma once

#include <stdexcept>
#include <string>

namespace optomech {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: violated precondition, malformed parameters, mismatched layouts.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: non-convergence, integrator breakdown, degenerate null space.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DegenerateCouplingError : public InputError {
 public:
  using InputError::InputError;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class NonHermitianError : public InputError {
 public:
  using InputError::InputError;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double time)
      : NumericalError(what), time_(time) {}
  /// Simulation time at which the integrator gave up.
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class DegenerateSteadyStateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace optomech
