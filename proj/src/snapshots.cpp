#include "sfv/snapshots.hpp"

#include <sstream>

#include "sfv/errors.hpp"

namespace sfv {

DeterministicRun run_deterministic_1d(const ConservationLaw& law, const Interval& x_domain,
                                      int nx, BoundaryKind bc, const WenoParams& weno,
                                      const std::function<void(double x, double* u)>& u0,
                                      const TimeIntegratorConfig& cfg) {
  TensorGrid grid(x_domain, nx, {});
  SfvOperator op(law, grid, DensityFn::uniform(), bc, weno);
  const InitialCondition ic = [&u0](double x, const double*, double* u) { u0(x, u); };
  FomResult fom = run_fom(op, ic, RhsVariant::Flux, cfg);

  DeterministicRun run;
  run.frame_times = fom.trajectory.frame_times;
  run.frames = std::move(fom.trajectory.frames);
  run.fluxes.reserve(run.frames.size());
  for (const StateField& frame : run.frames) {
    const FluxTrace trace = op.flux_trace(frame);
    Eigen::MatrixXd f(law.n_components, nx + 1);
    for (int p = 0; p < law.n_components; ++p) f.row(p) = trace.values[p].row(0);
    run.fluxes.push_back(std::move(f));
  }
  return run;
}

SnapshotMatrix collect_intrusive(const SfvOperator& op, const std::vector<StateField>& frames,
                                 const std::vector<double>& frame_times) {
  if (frames.empty() || frames.size() != frame_times.size())
    throw ConfigError("snapshot assembly: frame count does not match schedule");
  const int nx = op.grid().nx();
  const int n = op.law().n_components;
  const int m = static_cast<int>(frames.size());

  SnapshotMatrix snap;
  snap.nx = nx;
  snap.n_comp = n;
  snap.frame_times = frame_times;
  snap.values.resize(op.quadrature().total(), static_cast<Eigen::Index>(m) * n * (nx + 1));
  snap.columns.reserve(static_cast<size_t>(m) * n * (nx + 1));
  Eigen::Index c = 0;
  for (int f = 0; f < m; ++f) {
    const FluxTrace trace = op.flux_trace(frames[f]);
    for (int p = 0; p < n; ++p) {
      for (int k = 0; k <= nx; ++k, ++c) {
        snap.values.col(c) = trace.values[p].col(k);
        snap.columns.push_back({f, p, k});
      }
    }
  }
  snap.validate();
  return snap;
}

SnapshotMatrix collect_nonintrusive(const SfvOperator& op, const InitialCondition& u0,
                                    const TimeIntegratorConfig& cfg) {
  const TensorGrid& grid = op.grid();
  const QuadratureSet& qs = op.quadrature();
  const int nx = grid.nx();
  const int n = op.law().n_components;
  const int m = cfg.frames;
  const int total = qs.total();

  SnapshotMatrix snap;
  snap.nx = nx;
  snap.n_comp = n;
  snap.values.resize(total, static_cast<Eigen::Index>(m) * n * (nx + 1));
  for (int f = 0; f < m; ++f)
    for (int p = 0; p < n; ++p)
      for (int k = 0; k <= nx; ++k) snap.columns.push_back({f, p, k});

  std::vector<double> y(std::max(grid.q(), 1));
  for (int l = 0; l < total; ++l) {
    for (int d = 0; d < grid.q(); ++d) y[d] = qs.nodes(l, d);
    const auto u0_fixed = [&u0, &y](double x, double* u) { u0(x, y.data(), u); };
    const auto context = [&](const char* what) {
      std::ostringstream msg;
      msg << "deterministic run at node " << l << ", y = (";
      for (int d = 0; d < grid.q(); ++d) msg << (d ? ", " : "") << y[d];
      msg << ") failed: " << what;
      return msg.str();
    };
    DeterministicRun run;
    try {
      run = run_deterministic_1d(op.law(), grid.physical(), nx, op.boundary(), op.weno(),
                                 u0_fixed, cfg);
    } catch (const PositivityError& e) {
      throw PositivityError(context(e.what()), e.cell_x, e.cell_y, e.field, e.value);
    } catch (const IntegrationError& e) {
      throw IntegrationError(context(e.what()), e.t_reached);
    } catch (const std::exception& e) {
      throw ConfigError(context(e.what()));
    }
    if (run.frame_times.size() != static_cast<size_t>(m))
      throw ConfigError("deterministic run produced an unexpected frame count");
    snap.frame_times = run.frame_times;
    Eigen::Index c = 0;
    for (int f = 0; f < m; ++f)
      for (int p = 0; p < n; ++p)
        for (int k = 0; k <= nx; ++k, ++c) snap.values(l, c) = run.fluxes[f](p, k);
  }
  snap.validate();
  return snap;
}

}  // namespace sfv
