#include "sfv/problems.hpp"

#include <cmath>

#include "sfv/errors.hpp"

namespace sfv {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<std::pair<Interval, int>> unit_dims(const std::vector<int>& cells_per_dim) {
  std::vector<std::pair<Interval, int>> dims;
  dims.reserve(cells_per_dim.size());
  for (int c : cells_per_dim) dims.push_back({Interval{0.0, 1.0}, c});
  return dims;
}

InitialCondition sod_initial(double gamma, double x0_base, double x0_span) {
  return [gamma, x0_base, x0_span](double x, const double* y, double* u) {
    const double x0 = x0_base + x0_span * y[0];
    if (x < x0)
      euler_conserved_from_primitive(1.0, 0.0, 1.0, gamma, u);
    else
      euler_conserved_from_primitive(0.125, 0.0, 0.1, gamma, u);
  };
}

}  // namespace

ProblemSetup burgers_sine(const std::vector<int>& cells_per_dim) {
  if (cells_per_dim.size() != 2)
    throw ConfigError("burgers-sine has two stochastic dimensions");
  ProblemSetup p;
  p.name = "burgers-sine";
  p.law = ConservationLaw::burgers();
  p.x_domain = {0.0, 1.0};
  p.bc = BoundaryKind::Periodic;
  p.stochastic_dims = unit_dims(cells_per_dim);
  p.initial = [](double x, const double* y, double* u) {
    u[0] = (1.0 + 0.5 * y[0]) * std::sin(2.0 * kPi * x) + y[1];
  };
  p.t_final = 0.2;
  return p;
}

ProblemSetup sod_narrow(const std::vector<int>& cells_per_dim) {
  if (cells_per_dim.size() != 1) throw ConfigError("sod-narrow has one stochastic dimension");
  ProblemSetup p;
  p.name = "sod-narrow";
  p.law = ConservationLaw::euler(1.4);
  p.x_domain = {0.0, 1.0};
  p.bc = BoundaryKind::ZeroGradient;
  p.stochastic_dims = unit_dims(cells_per_dim);
  p.initial = sod_initial(1.4, 0.475, 0.05);
  p.t_final = 0.2;
  return p;
}

ProblemSetup sod_wide(const std::vector<int>& cells_per_dim) {
  if (cells_per_dim.size() != 1) throw ConfigError("sod-wide has one stochastic dimension");
  ProblemSetup p = sod_narrow(cells_per_dim);
  p.name = "sod-wide";
  p.initial = sod_initial(1.4, 0.3, 0.3);
  return p;
}

ProblemSetup custom_riemann(const ConservationLaw& law, const std::vector<double>& left,
                            const std::vector<double>& right, double x0_base, double x0_span,
                            Interval x_domain, BoundaryKind bc, double t_final,
                            const std::vector<int>& cells_per_dim) {
  const size_t want = static_cast<size_t>(law.n_components);
  if (left.size() != want || right.size() != want)
    throw ConfigError("custom problem: state vectors must have one entry per component");
  if (cells_per_dim.empty()) throw ConfigError("custom problem: no stochastic dimensions");
  if (!(t_final > 0.0)) throw ConfigError("custom problem: t_final must be positive");
  ProblemSetup p;
  p.name = "custom";
  p.law = law;
  p.x_domain = x_domain;
  p.bc = bc;
  p.stochastic_dims = unit_dims(cells_per_dim);
  p.t_final = t_final;
  if (law.kind == LawKind::Euler) {
    const double gamma = law.gamma;
    p.initial = [gamma, left, right, x0_base, x0_span](double x, const double* y, double* u) {
      const double x0 = x0_base + x0_span * y[0];
      const auto& w = x < x0 ? left : right;
      euler_conserved_from_primitive(w[0], w[1], w[2], gamma, u);
    };
  } else {
    p.initial = [left, right, x0_base, x0_span](double x, const double* y, double* u) {
      const double x0 = x0_base + x0_span * y[0];
      u[0] = x < x0 ? left[0] : right[0];
    };
  }
  return p;
}

}  // namespace sfv
