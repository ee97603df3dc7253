#ifndef SFV_SNAPSHOTS_HPP_
#define SFV_SNAPSHOTS_HPP_

#include <vector>

#include "sfv/rom.hpp"
#include "sfv/solver.hpp"

namespace sfv {

// Decoupled 1D finite-volume run at one fixed parameter point.
struct DeterministicRun {
  std::vector<double> y;  // the parameter point (empty when not tied to one)
  std::vector<double> frame_times;
  std::vector<StateField> frames;        // 1D fields (ny = 1)
  std::vector<Eigen::MatrixXd> fluxes;   // per frame: n_comp x (nx+1) interface fluxes
};

// Standard 1D WENO finite-volume run (degenerate stochastic grid) with the
// same reconstruction, flux and integrator stack as the full solver.
DeterministicRun run_deterministic_1d(const ConservationLaw& law, const Interval& x_domain,
                                      int nx, BoundaryKind bc, const WenoParams& weno,
                                      const std::function<void(double x, double* u)>& u0,
                                      const TimeIntegratorConfig& cfg);

// Assemble the snapshot matrix from stored solution frames by re-running the
// flux reconstruction on each frame. Column c = (frame*n + component)*(nx+1)
// + interface: frame-major, then component, then unique interface.
SnapshotMatrix collect_intrusive(const SfvOperator& op, const std::vector<StateField>& frames,
                                 const std::vector<double>& frame_times);

// One decoupled deterministic 1D run per global quadrature node y_l; row l of
// the matrix holds that run's interface fluxes, frame times shared with the
// intrusive schedule. A failing run is reported with its node, never dropped.
SnapshotMatrix collect_nonintrusive(const SfvOperator& op, const InitialCondition& u0,
                                    const TimeIntegratorConfig& cfg);

}  // namespace sfv

#endif  // SFV_SNAPSHOTS_HPP_
