#include "sfv/solver.hpp"

#include <array>
#include <cmath>

namespace sfv {

namespace {

// sum of f * pdf * w over the nodes of one stochastic cell, fixed node order
double integrate_cell(const QuadratureSet& qs, const double* node_values, int cell) {
  const int nn = qs.nodes_per_cell;
  const int base = cell * nn;
  double acc = 0.0;
  for (int m = 0; m < nn; ++m) {
    const int l = base + m;
    acc += node_values[l] * qs.pdf[l] * qs.weights[l];
  }
  return acc;
}

}  // namespace

SfvOperator::SfvOperator(ConservationLaw law, TensorGrid grid, DensityFn density, BoundaryKind bc,
                         WenoParams weno)
    : law_(law),
      grid_(std::move(grid)),
      density_(std::move(density)),
      bc_(bc),
      weno_(weno),
      quad_(tensor_gauss_nodes(grid_, density_)),
      measures_(cell_measures(grid_, quad_)),
      node_eval_(node_eval_matrix(grid_.q())) {
  weno_.validate();
}

StateField SfvOperator::project_initial_condition(const InitialCondition& u0) const {
  const int nx = grid_.nx(), ny = grid_.ny(), n = law_.n_components;
  const int nn = quad_.nodes_per_cell;
  StateField U(n, nx, ny);
  const double gx = 0.5 / std::sqrt(3.0);  // 2-pt Gauss offsets on a unit cell
  std::array<double, kMaxComponents> u{};
  std::vector<double> y(std::max(grid_.q(), 1));
  for (int i = 0; i < nx; ++i) {
    const double xc = grid_.x_center(i);
    const double dx = grid_.dx();
    const std::array<double, 2> xg{xc - gx * dx, xc + gx * dx};
    for (int j = 0; j < ny; ++j) {
      std::array<double, kMaxComponents> acc{};
      for (int m = 0; m < nn; ++m) {
        const int l = quad_.node_index(j, m);
        for (int d = 0; d < grid_.q(); ++d) y[d] = quad_.nodes(l, d);
        const double wy = quad_.pdf[l] * quad_.weights[l];
        for (const double x : xg) {
          u0(x, y.data(), u.data());
          // x-quadrature weight dx/2 cancels against the 1/dx of the average
          for (int p = 0; p < n; ++p) acc[p] += u[p] * wy * 0.5;
        }
      }
      const double inv_mass = 1.0 / measures_.stochastic[j];
      for (int p = 0; p < n; ++p) U.at(p, i, j) = acc[p] * inv_mass;
      std::array<double, kMaxComponents> cell{};
      for (int p = 0; p < n; ++p) cell[p] = U.at(p, i, j);
      law_.require_admissible(cell.data(), i, j);
    }
  }
  return U;
}

void SfvOperator::assemble_rhs(const std::vector<Eigen::MatrixXd>& fbar, StateField& dUdt) const {
  const int nx = grid_.nx(), ny = grid_.ny(), n = law_.n_components;
  const double inv_dx = 1.0 / grid_.dx();
  for (int p = 0; p < n; ++p) {
    const Eigen::MatrixXd& f = fbar[p];
    for (int i = 0; i < nx; ++i) {
      double* out = dUdt.row(p, i);
      for (int j = 0; j < ny; ++j)
        out[j] = -(f(i + 1, j) - f(i, j)) * inv_dx / measures_.stochastic[j];
    }
  }
}

void SfvOperator::rhs_state_reconstruction(const StateField& U, StateField& dUdt) const {
  ++counters_.rhs_calls;
  const int nx = grid_.nx(), ny = grid_.ny(), n = law_.n_components;
  const int total = quad_.total();
  const InterfaceStates is = reconstruct_physical(U, bc_, weno_);

  std::vector<Eigen::MatrixXd> fbar(n, Eigen::MatrixXd(nx + 1, ny));
  std::vector<Eigen::VectorXd> uLn(n, Eigen::VectorXd(total)), uRn(n, Eigen::VectorXd(total));
  std::vector<Eigen::VectorXd> fn(n, Eigen::VectorXd(total));
  Eigen::VectorXd row(ny);
  std::array<double, kMaxComponents> uL{}, uR{}, f{};

  for (int k = 0; k <= nx; ++k) {
    for (int p = 0; p < n; ++p) {
      row = is.left[p].row(k).transpose();
      const StochasticPolyField polyL = reconstruct_stochastic(row, grid_, weno_);
      row = is.right[p].row(k).transpose();
      const StochasticPolyField polyR = reconstruct_stochastic(row, grid_, weno_);
      for (int j = 0; j < ny; ++j) {
        for (int m = 0; m < quad_.nodes_per_cell; ++m) {
          const int l = quad_.node_index(j, m);
          uLn[p][l] = eval_node(node_eval_, polyL.coeffs, j, m);
          uRn[p][l] = eval_node(node_eval_, polyR.coeffs, j, m);
        }
      }
    }
    for (int l = 0; l < total; ++l) {
      for (int p = 0; p < n; ++p) {
        uL[p] = uLn[p][l];
        uR[p] = uRn[p][l];
      }
      lax_friedrichs(law_, uL.data(), uR.data(), f.data(), k, quad_.owner[l]);
      ++counters_.flux_evals;
      for (int p = 0; p < n; ++p) fn[p][l] = f[p];
    }
    for (int p = 0; p < n; ++p)
      for (int j = 0; j < ny; ++j) fbar[p](k, j) = integrate_cell(quad_, fn[p].data(), j);
  }
  assemble_rhs(fbar, dUdt);
}

std::vector<Eigen::MatrixXd> SfvOperator::interface_cell_fluxes(
    const StateField& U, const std::vector<int>& cells) const {
  const int nx = grid_.nx(), ny = grid_.ny(), n = law_.n_components;
  std::vector<Eigen::MatrixXd> G(n, Eigen::MatrixXd::Zero(ny, nx + 1));
  // per-cell physical traces at the nx+1 interfaces of one stochastic cell
  std::vector<Eigen::VectorXd> Lface(n, Eigen::VectorXd(nx + 1)),
      Rface(n, Eigen::VectorXd(nx + 1));
  std::array<double, kMaxComponents> uL{}, uR{}, f{};

  auto run_cell = [&](int j) {
    for (int p = 0; p < n; ++p) {
      for (int i = 0; i < nx; ++i) {
        const EdgePair e =
            weno3_pair(U.at(p, physical_neighbor(i, -1, nx, bc_), j), U.at(p, i, j),
                       U.at(p, physical_neighbor(i, +1, nx, bc_), j), weno_);
        Rface[p][i] = e.left;
        Lface[p][i + 1] = e.right;
      }
      if (bc_ == BoundaryKind::Periodic) {
        Lface[p][0] = Lface[p][nx];
        Rface[p][nx] = Rface[p][0];
      } else {
        Lface[p][0] = U.at(p, 0, j);
        Rface[p][nx] = U.at(p, nx - 1, j);
      }
    }
    for (int k = 0; k <= nx; ++k) {
      for (int p = 0; p < n; ++p) {
        uL[p] = Lface[p][k];
        uR[p] = Rface[p][k];
      }
      lax_friedrichs(law_, uL.data(), uR.data(), f.data(), k, j);
      ++counters_.flux_evals;
      for (int p = 0; p < n; ++p) G[p](j, k) = f[p];
    }
  };

  if (cells.empty())
    for (int j = 0; j < ny; ++j) run_cell(j);
  else
    for (int j : cells) run_cell(j);
  return G;
}

FluxTrace SfvOperator::flux_trace(const StateField& U) const {
  const int nx = grid_.nx(), ny = grid_.ny(), n = law_.n_components;
  const std::vector<Eigen::MatrixXd> G = interface_cell_fluxes(U, {});
  FluxTrace trace;
  trace.n_comp = n;
  trace.nx = nx;
  trace.values.assign(n, Eigen::MatrixXd(quad_.total(), nx + 1));
  for (int p = 0; p < n; ++p) {
    for (int k = 0; k <= nx; ++k) {
      const StochasticPolyField poly = reconstruct_stochastic(G[p].col(k), grid_, weno_);
      for (int j = 0; j < ny; ++j)
        for (int m = 0; m < quad_.nodes_per_cell; ++m)
          trace.values[p](quad_.node_index(j, m), k) = eval_node(node_eval_, poly.coeffs, j, m);
    }
  }
  return trace;
}

void SfvOperator::rhs_flux_reconstruction(const StateField& U, StateField& dUdt,
                                          FluxTrace* trace_out) const {
  ++counters_.rhs_calls;
  const int nx = grid_.nx(), ny = grid_.ny(), n = law_.n_components;
  FluxTrace trace = flux_trace(U);
  std::vector<Eigen::MatrixXd> fbar(n, Eigen::MatrixXd(nx + 1, ny));
  for (int p = 0; p < n; ++p)
    for (int k = 0; k <= nx; ++k)
      for (int j = 0; j < ny; ++j)
        fbar[p](k, j) = integrate_cell(quad_, trace.values[p].col(k).data(), j);
  assemble_rhs(fbar, dUdt);
  if (trace_out != nullptr) *trace_out = std::move(trace);
}

double SfvOperator::cfl_initial_dt(const StateField& U) const {
  const int nx = grid_.nx(), ny = grid_.ny(), n = law_.n_components;
  std::array<double, kMaxComponents> u{};
  double lambda = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int p = 0; p < n; ++p) u[p] = U.at(p, i, j);
      lambda = std::max(lambda, law_.max_wave_speed(u.data(), u.data()));
    }
  }
  if (!(lambda > 1e-12)) return 0.0;  // no estimate; integrator picks a default
  return 0.5 * grid_.dx() / lambda;
}

FomResult run_fom(const SfvOperator& op, const InitialCondition& u0, RhsVariant variant,
                  TimeIntegratorConfig cfg) {
  const StateField U0 = op.project_initial_condition(u0);
  if (cfg.initial_dt <= 0.0) cfg.initial_dt = op.cfl_initial_dt(U0);
  RhsFn rhs;
  if (variant == RhsVariant::State) {
    rhs = [&op](double, const StateField& U, StateField& dUdt) {
      op.rhs_state_reconstruction(U, dUdt);
    };
  } else {
    rhs = [&op](double, const StateField& U, StateField& dUdt) {
      op.rhs_flux_reconstruction(U, dUdt);
    };
  }
  FomResult result;
  result.trajectory = integrate(U0, rhs, cfg);
  return result;
}

}  // namespace sfv
