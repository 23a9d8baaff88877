#pragma once

#include <stdexcept>
#include <string>

namespace cns {

/// Constraint violation in user-supplied parameters. The message names the
/// violated constraint.
struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Grid too coarse to resolve a requested scale. Carries the minimal
/// adequate points-per-side (a power of two).
struct NyquistError : std::runtime_error {
  int required_points_per_side;
  NyquistError(const std::string& msg, int required)
      : std::runtime_error(msg), required_points_per_side(required) {}
};

/// Time quadrature detected non-decaying band contributions: the integral
/// does not converge for the given field. Signals that the Carleson-type
/// condition fails; not a crash.
struct QuadratureDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical assertion failed (residual above tolerance, refused fit, ...).
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cns
