#ifndef SFV_ERRORS_HPP_
#define SFV_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sfv {

// Invalid run configuration (bad mesh sizes, missing paths, ...). CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inadmissible hydrodynamic state (rho <= 0 or p <= 0) detected while
// evaluating a numerical flux or projecting an initial condition.
// Carries the location so failures can be reported, not clamped. Exit code 3.
struct PositivityError : std::runtime_error {
  int cell_x;       // physical cell or interface index
  int cell_y;       // stochastic cell index (-1 if not applicable)
  std::string field;  // "rho" or "pressure"
  double value;

  PositivityError(int ix, int jy, std::string which, double v)
      : std::runtime_error("inadmissible state: " + which + " = " + std::to_string(v) +
                           " at physical index " + std::to_string(ix) +
                           ", stochastic cell " + std::to_string(jy)),
        cell_x(ix), cell_y(jy), field(std::move(which)), value(v) {}

  // same payload under a caller-provided message (context wrapping)
  PositivityError(std::string msg, int ix, int jy, std::string which, double v)
      : std::runtime_error(std::move(msg)),
        cell_x(ix), cell_y(jy), field(std::move(which)), value(v) {}
};

// Adaptive time stepper could not continue (step size underflow or step
// budget exhausted). Exit code 4.
struct IntegrationError : std::runtime_error {
  double t_reached;
  IntegrationError(const std::string& msg, double t)
      : std::runtime_error(msg), t_reached(t) {}
};

// File IO / format problems. Exit code 5.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sfv

#endif  // SFV_ERRORS_HPP_
