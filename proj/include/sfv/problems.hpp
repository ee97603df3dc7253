#ifndef SFV_PROBLEMS_HPP_
#define SFV_PROBLEMS_HPP_

#include <string>
#include <vector>

#include "sfv/solver.hpp"

namespace sfv {

// A fully specified experiment: law, domains, boundary treatment, initial
// data and final time. Stochastic cell counts come from the run configuration.
struct ProblemSetup {
  std::string name;
  ConservationLaw law;
  Interval x_domain{0.0, 1.0};
  BoundaryKind bc = BoundaryKind::Periodic;
  std::vector<std::pair<Interval, int>> stochastic_dims;
  InitialCondition initial;
  double t_final = 0.2;
};

// u0(x, y1, y2) = (1 + 0.5 y1) sin(2 pi x) + y2 on [0,1] periodic, y ~ U[0,1]^2
ProblemSetup burgers_sine(const std::vector<int>& cells_per_dim);

// Sod shock tube with uncertain membrane location x0(y) = 0.475 + 0.05 y
ProblemSetup sod_narrow(const std::vector<int>& cells_per_dim);

// Sod shock tube with widely varying membrane x0(y) = 0.3 + 0.3 y
ProblemSetup sod_wide(const std::vector<int>& cells_per_dim);

// Riemann problem assembled from explicit left/right states (primitive for
// Euler) with x0(y) = x0_base + x0_span * y1.
ProblemSetup custom_riemann(const ConservationLaw& law, const std::vector<double>& left,
                            const std::vector<double>& right, double x0_base, double x0_span,
                            Interval x_domain, BoundaryKind bc, double t_final,
                            const std::vector<int>& cells_per_dim);

}  // namespace sfv

#endif  // SFV_PROBLEMS_HPP_
