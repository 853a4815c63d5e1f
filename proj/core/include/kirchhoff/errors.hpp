#pragma once

#include <stdexcept>
#include <string>

namespace kirchhoff {

/// Invalid argument value (negative order, negative norm target, zero mode, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operands live on incompatible grids.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Input lies outside the set where a map is defined (negative argument of
/// rho, state outside an inversion ball, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative procedure (Neumann series, fixed point) failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating point failure: singular matrix, non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite state produced during time integration.
class BlowupError : public NumericalError {
 public:
  BlowupError(const std::string& what, double time)
      : NumericalError(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace kirchhoff
