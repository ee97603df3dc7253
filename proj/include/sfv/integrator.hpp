#ifndef SFV_INTEGRATOR_HPP_
#define SFV_INTEGRATOR_HPP_

#include <functional>
#include <vector>

#include "sfv/errors.hpp"
#include "sfv/state.hpp"

namespace sfv {

struct TimeIntegratorConfig {
  double rel_tol = 1e-6;
  double abs_tol = 1e-8;
  double t_final = 0.0;
  double initial_dt = 0.0;  // <= 0: pick a heuristic
  long max_steps = 1000000;
  int frames = 50;  // m equally spaced output frames in (0, t_final]

  void validate() const;
};

using RhsFn = std::function<void(double t, const StateField& U, StateField& dUdt)>;

struct Trajectory {
  std::vector<double> frame_times;  // k * t_final / m, k = 1..m
  std::vector<StateField> frames;
  StateField final_state;  // frames.back()
  long steps_accepted = 0;
  long steps_rejected = 0;
  double max_error_estimate = 0.0;  // largest scaled embedded estimate among accepted steps (<= 1)
};

// Integration failure (step-size underflow, step budget) carrying the last
// valid state; positivity errors from the RHS propagate unchanged.
struct IntegrationFailure : IntegrationError {
  StateField last_state;
  IntegrationFailure(double t_reached_, StateField state)
      : IntegrationError("time integration stalled at t = " + std::to_string(t_reached_),
                         t_reached_),
        last_state(std::move(state)) {}
};

// Embedded adaptive Runge-Kutta 5(4) with the Dormand-Prince coefficients and
// PI step-size control; steps are clipped to land exactly on each frame time.
Trajectory integrate(const StateField& U0, const RhsFn& rhs, const TimeIntegratorConfig& cfg);

}  // namespace sfv

#endif  // SFV_INTEGRATOR_HPP_
