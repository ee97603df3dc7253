#ifndef SFV_SOLVER_HPP_
#define SFV_SOLVER_HPP_

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "sfv/grid.hpp"
#include "sfv/integrator.hpp"
#include "sfv/physics.hpp"
#include "sfv/state.hpp"
#include "sfv/weno.hpp"

namespace sfv {

// u0(x, y) -> conserved components (n of them) written into `u`
using InitialCondition = std::function<void(double x, const double* y, double* u)>;

// Reconstructed flux values at every quadrature node for the nx+1 unique
// physical interfaces. Column k of values[p] is interface x_{k-1/2}; row l is
// global quadrature node l. The two interface-side views share the interior
// columns, which is exactly the duplication the snapshot assembly removes.
struct FluxTrace {
  int n_comp = 0;
  int nx = 0;
  std::vector<Eigen::MatrixXd> values;  // per component: (nq*ny) x (nx+1)

  // F at x_{i+1/2} for cells i = 0..nx-1
  Eigen::Block<const Eigen::MatrixXd> plus(int p) const { return values[p].rightCols(nx); }
  // F at x_{i-1/2} for cells i = 0..nx-1
  Eigen::Block<const Eigen::MatrixXd> minus(int p) const { return values[p].leftCols(nx); }
};

struct PerfCounters {
  long long flux_evals = 0;  // Lax-Friedrichs calls
  long long rhs_calls = 0;

  void reset() { *this = PerfCounters{}; }
};

// Semi-discrete SFV operator on a fixed tensor grid: projects initial data,
// and evaluates dU/dt by either reconstruction variant. The flux variant can
// also hand out its reconstructed flux trace for snapshot collection.
class SfvOperator {
 public:
  SfvOperator(ConservationLaw law, TensorGrid grid, DensityFn density,
              BoundaryKind bc = BoundaryKind::Periodic, WenoParams weno = WenoParams{});

  const ConservationLaw& law() const { return law_; }
  const TensorGrid& grid() const { return grid_; }
  const QuadratureSet& quadrature() const { return quad_; }
  const CellMeasures& measures() const { return measures_; }
  BoundaryKind boundary() const { return bc_; }
  const WenoParams& weno() const { return weno_; }
  const Eigen::MatrixXd& node_matrix() const { return node_eval_; }
  PerfCounters& counters() const { return counters_; }

  // U_{i,j} = cell average of u0 against the pdf, via 2-pt Gauss per dimension
  // in x and the stochastic quadrature set in y; Euler averages are checked
  // for admissibility.
  StateField project_initial_condition(const InitialCondition& u0) const;

  // physical WENO -> stochastic WENO of the interface states -> numerical flux
  // at every quadrature node -> per-cell quadrature
  void rhs_state_reconstruction(const StateField& U, StateField& dUdt) const;

  // physical WENO -> one numerical flux per (interface, stochastic cell) ->
  // stochastic WENO of the flux -> node evaluation -> per-cell quadrature
  void rhs_flux_reconstruction(const StateField& U, StateField& dUdt,
                               FluxTrace* trace_out = nullptr) const;

  // the flux-variant trace alone (snapshot collection)
  FluxTrace flux_trace(const StateField& U) const;

  // Per-cell flux averages F-bar (per component, (nx+1) x ny at the unique
  // interfaces) assembled into -M^{-1}(F_+ - F_-).
  void assemble_rhs(const std::vector<Eigen::MatrixXd>& fbar, StateField& dUdt) const;

  // interface fluxes per stochastic cell: G[p](k, j) = LF flux at interface k
  // from the physical traces, evaluated at the cell's reconstruction values;
  // cells: subset of stochastic cells to evaluate (empty = all)
  std::vector<Eigen::MatrixXd> interface_cell_fluxes(const StateField& U,
                                                     const std::vector<int>& cells) const;

  // CFL-type initial step estimate from the cell-average wave speeds
  double cfl_initial_dt(const StateField& U) const;

 private:
  ConservationLaw law_;
  TensorGrid grid_;
  DensityFn density_;
  BoundaryKind bc_;
  WenoParams weno_;
  QuadratureSet quad_;
  CellMeasures measures_;
  Eigen::MatrixXd node_eval_;  // shared tensor-node evaluation matrix
  mutable PerfCounters counters_;
};

enum class RhsVariant { State, Flux };

struct FomResult {
  Trajectory trajectory;
};

// Project the initial condition and integrate with the selected RHS variant.
FomResult run_fom(const SfvOperator& op, const InitialCondition& u0, RhsVariant variant,
                  TimeIntegratorConfig cfg);

}  // namespace sfv

#endif  // SFV_SOLVER_HPP_
