#ifndef SFV_PHYSICS_HPP_
#define SFV_PHYSICS_HPP_

#include <array>
#include <cmath>

#include "sfv/errors.hpp"

namespace sfv {

constexpr int kMaxComponents = 3;

enum class LawKind { Burgers, Euler };

inline double burgers_flux(double u) { return 0.5 * u * u; }

inline double euler_pressure(double rho, double rhou, double energy, double gamma) {
  if (!(rho > 0.0)) throw PositivityError(-1, -1, "rho", rho);
  return (gamma - 1.0) * (energy - 0.5 * rhou * rhou / rho);
}

// Conservation law with analytic flux, Davis-type local wave speed bound and
// an admissibility predicate. Kept as a flat struct so flux evaluation inlines
// in the reconstruction loops.
struct ConservationLaw {
  LawKind kind = LawKind::Burgers;
  int n_components = 1;
  double gamma = 1.4;  // Euler only

  static ConservationLaw burgers() { return ConservationLaw{LawKind::Burgers, 1, 0.0}; }
  static ConservationLaw euler(double gamma_) {
    if (!(gamma_ > 1.0)) throw ConfigError("gamma must exceed 1");
    return ConservationLaw{LawKind::Euler, 3, gamma_};
  }

  bool admissible(const double* u) const {
    if (kind == LawKind::Burgers) return std::isfinite(u[0]);
    if (!(u[0] > 0.0)) return false;
    const double p = (gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0]);
    return p > 0.0;
  }

  // throws PositivityError tagged with (ix, jy) when the state is inadmissible
  void require_admissible(const double* u, int ix, int jy) const {
    if (kind == LawKind::Burgers) return;
    if (!(u[0] > 0.0)) throw PositivityError(ix, jy, "rho", u[0]);
    const double p = (gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0]);
    if (!(p > 0.0)) throw PositivityError(ix, jy, "pressure", p);
  }

  void flux(const double* u, double* f) const {
    if (kind == LawKind::Burgers) {
      f[0] = burgers_flux(u[0]);
      return;
    }
    const double rho = u[0], rhou = u[1], energy = u[2];
    const double vel = rhou / rho;
    const double p = (gamma - 1.0) * (energy - 0.5 * rhou * vel);
    f[0] = rhou;
    f[1] = rhou * vel + p;
    f[2] = vel * (energy + p);
  }

  // Davis bound: max(|u|, |u'|) for Burgers, max(|u|+c) over both states for Euler
  double max_wave_speed(const double* uL, const double* uR) const {
    if (kind == LawKind::Burgers) return std::max(std::abs(uL[0]), std::abs(uR[0]));
    const double velL = uL[1] / uL[0];
    const double velR = uR[1] / uR[0];
    const double pL = (gamma - 1.0) * (uL[2] - 0.5 * uL[1] * velL);
    const double pR = (gamma - 1.0) * (uR[2] - 0.5 * uR[1] * velR);
    const double cL = std::sqrt(gamma * pL / uL[0]);
    const double cR = std::sqrt(gamma * pR / uR[0]);
    return std::max(std::abs(velL) + cL, std::abs(velR) + cR);
  }
};

// F_hat(uL, uR) = 1/2 (F(uL) + F(uR)) - lambda/2 (uR - uL)
// Location (ix, jy) is carried into the positivity report on inadmissible input.
inline void lax_friedrichs(const ConservationLaw& law, const double* uL, const double* uR,
                           double* out, int ix = -1, int jy = -1) {
  law.require_admissible(uL, ix, jy);
  law.require_admissible(uR, ix, jy);
  const double lambda = law.max_wave_speed(uL, uR);
  std::array<double, kMaxComponents> fL{}, fR{};
  law.flux(uL, fL.data());
  law.flux(uR, fR.data());
  for (int p = 0; p < law.n_components; ++p)
    out[p] = 0.5 * (fL[p] + fR[p]) - 0.5 * lambda * (uR[p] - uL[p]);
}

inline double davis_wave_speed(const ConservationLaw& law, const double* uL, const double* uR,
                               int ix = -1, int jy = -1) {
  law.require_admissible(uL, ix, jy);
  law.require_admissible(uR, ix, jy);
  return law.max_wave_speed(uL, uR);
}

inline void euler_conserved_from_primitive(double rho, double vel, double p, double gamma,
                                           double* u) {
  u[0] = rho;
  u[1] = rho * vel;
  u[2] = p / (gamma - 1.0) + 0.5 * rho * vel * vel;
}

inline void euler_primitive_from_conserved(const double* u, double gamma, double* w) {
  w[0] = u[0];
  w[1] = u[1] / u[0];
  w[2] = euler_pressure(u[0], u[1], u[2], gamma);
}

inline void euler_flux(const double* u, double gamma, double* f) {
  auto law = ConservationLaw::euler(gamma);
  law.require_admissible(u, -1, -1);
  law.flux(u, f);
}

}  // namespace sfv

#endif  // SFV_PHYSICS_HPP_
