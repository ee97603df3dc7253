#include "sfv/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace sfv {

void TimeIntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (!(t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (frames < 1) throw ConfigError("frames must be at least 1");
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// embedded 4th-order weights
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

// PI controller constants (order-5 pair)
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - 0.75 * kBeta;
constexpr double kSafety = 0.9;

double scaled_error(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                    const Eigen::VectorXd& y1, double abs_tol, double rel_tol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

Trajectory integrate(const StateField& U0, const RhsFn& rhs, const TimeIntegratorConfig& cfg) {
  cfg.validate();
  const double T = cfg.t_final;
  const int m = cfg.frames;

  Trajectory out;
  out.frame_times.reserve(m);
  for (int k = 1; k <= m; ++k) out.frame_times.push_back(T * k / m);

  StateField state = U0;
  StateField stage = U0;  // scratch holding the argument of each RHS call
  StateField deriv = U0;  // scratch receiving RHS output
  const Eigen::Index nvar = state.data.size();

  Eigen::VectorXd k1(nvar), k2(nvar), k3(nvar), k4(nvar), k5(nvar), k6(nvar), k7(nvar);
  Eigen::VectorXd y5(nvar), errv(nvar);

  double t = 0.0;
  rhs(t, state, deriv);
  k1 = deriv.data;

  double dt = cfg.initial_dt > 0.0 ? std::min(cfg.initial_dt, T) : T / 100.0;
  double facold = 1e-4;
  bool last_rejected = false;
  int frame_idx = 0;

  while (frame_idx < m) {
    if (out.steps_accepted + out.steps_rejected >= cfg.max_steps)
      throw IntegrationFailure(t, state);
    if (dt < 1e-14 * T) throw IntegrationFailure(t, state);

    const double t_target = out.frame_times[frame_idx];
    bool clipped = false;
    if (t + dt >= t_target) {
      dt = t_target - t;
      clipped = true;
    }

    const auto& y = state.data;
    stage.data = y + dt * (a21 * k1);
    rhs(t + c2 * dt, stage, deriv);
    k2 = deriv.data;
    stage.data = y + dt * (a31 * k1 + a32 * k2);
    rhs(t + c3 * dt, stage, deriv);
    k3 = deriv.data;
    stage.data = y + dt * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * dt, stage, deriv);
    k4 = deriv.data;
    stage.data = y + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * dt, stage, deriv);
    k5 = deriv.data;
    stage.data = y + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + dt, stage, deriv);
    k6 = deriv.data;
    y5 = y + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    stage.data = y5;
    rhs(t + dt, stage, deriv);
    k7 = deriv.data;  // FSAL
    errv = dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    if (!y5.allFinite() || !errv.allFinite()) {
      ++out.steps_rejected;
      dt *= 0.5;
      last_rejected = true;
      continue;
    }

    const double err =
        std::max(scaled_error(errv, y, y5, cfg.abs_tol, cfg.rel_tol), 1e-16);
    const double fac11 = std::pow(err, kExpo1);

    if (err <= 1.0) {
      ++out.steps_accepted;
      out.max_error_estimate = std::max(out.max_error_estimate, err);
      t = clipped ? t_target : t + dt;
      state.data = y5;
      k1 = k7;
      if (clipped) {
        out.frames.push_back(state);
        ++frame_idx;
      }
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::max(0.1, std::min(5.0, fac / kSafety));
      double dt_new = dt / fac;
      if (last_rejected) dt_new = std::min(dt_new, dt);
      facold = std::max(err, 1e-4);
      last_rejected = false;
      dt = dt_new;
    } else {
      ++out.steps_rejected;
      dt = dt / std::min(5.0, fac11 / kSafety);
      last_rejected = true;
    }
  }

  out.final_state = out.frames.back();
  return out;
}

}  // namespace sfv
