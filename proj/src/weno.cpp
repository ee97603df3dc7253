#include "sfv/weno.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>

#include "sfv/errors.hpp"

namespace sfv {

void WenoParams::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("weno epsilon must be positive");
  for (const auto& d : {d_right, d_left}) {
    if (!(d[0] > 0.0 && d[1] > 0.0)) throw ConfigError("weno linear weights must be positive");
    if (std::abs(d[0] + d[1] - 1.0) > 1e-12)
      throw ConfigError("weno linear weights must sum to 1");
  }
}

std::array<double, 2> weno3_weights(double beta0, double beta1, const std::array<double, 2>& d,
                                    double epsilon) {
  const double a0 = d[0] / ((epsilon + beta0) * (epsilon + beta0));
  const double a1 = d[1] / ((epsilon + beta1) * (epsilon + beta1));
  const double inv = 1.0 / (a0 + a1);
  return {a0 * inv, a1 * inv};
}

EdgePair weno3_pair(double u_minus, double u_center, double u_plus, const WenoParams& params) {
  const double dp = u_plus - u_center;
  const double dm = u_center - u_minus;
  const double beta0 = dp * dp;
  const double beta1 = dm * dm;
  const auto wr = weno3_weights(beta0, beta1, params.d_right, params.epsilon);
  const auto wl = weno3_weights(beta0, beta1, params.d_left, params.epsilon);
  return {u_center - 0.5 * (wl[0] * dp + wl[1] * dm),
          u_center + 0.5 * (wr[0] * dp + wr[1] * dm)};
}

double weno3_slope(double delta_minus, double delta_plus, double epsilon) {
  const double beta0 = delta_plus * delta_plus;
  const double beta1 = delta_minus * delta_minus;
  const auto w = weno3_weights(beta0, beta1, {0.5, 0.5}, epsilon);
  return w[0] * delta_plus + w[1] * delta_minus;
}

InterfaceStates reconstruct_physical(const StateField& U, BoundaryKind bc,
                                     const WenoParams& params) {
  const int nx = U.nx, ny = U.ny;
  if (nx < 3) throw ConfigError("physical reconstruction needs at least 3 cells");
  InterfaceStates out;
  out.left.assign(U.n_comp, Eigen::MatrixXd::Zero(nx + 1, ny));
  out.right.assign(U.n_comp, Eigen::MatrixXd::Zero(nx + 1, ny));
  for (int p = 0; p < U.n_comp; ++p) {
    Eigen::MatrixXd& L = out.left[p];
    Eigen::MatrixXd& R = out.right[p];
    for (int i = 0; i < nx; ++i) {
      const double* um = U.row(p, physical_neighbor(i, -1, nx, bc));
      const double* u0 = U.row(p, i);
      const double* up = U.row(p, physical_neighbor(i, +1, nx, bc));
      for (int j = 0; j < ny; ++j) {
        const EdgePair e = weno3_pair(um[j], u0[j], up[j], params);
        R(i, j) = e.left;       // right trace at interface i-1/2
        L(i + 1, j) = e.right;  // left trace at interface i+1/2
      }
    }
    if (bc == BoundaryKind::Periodic) {
      // interfaces 0 and nx are the same point; stencils are identical too
      L.row(0) = L.row(nx);
      R.row(nx) = R.row(0);
    } else {
      // ghost cells replicate the boundary cell, whose reconstruction over a
      // constant stencil is that constant
      for (int j = 0; j < ny; ++j) {
        L(0, j) = U.at(p, 0, j);
        R(nx, j) = U.at(p, nx - 1, j);
      }
    }
  }
  return out;
}

double StochasticPolyField::evaluate(int cell, const double* xi) const {
  const int n = 1 << q;
  double acc = 0.0;
  for (int mask = 0; mask < n; ++mask) {
    double term = coeffs(cell, mask);
    for (int d = 0; d < q; ++d)
      if (mask & (1 << d)) term *= xi[d];
    acc += term;
  }
  return acc;
}

namespace {
std::once_flag g_fallback_warned;
}

bool stochastic_dim_is_constant(const TensorGrid& grid, int d) {
  if (grid.cells_per_dim(d) >= 3) return false;
  std::call_once(g_fallback_warned, [] {
    std::fprintf(stderr,
                 "warning: stochastic dimension with fewer than 3 cells; "
                 "using piecewise-constant reconstruction there\n");
  });
  return true;
}

void stochastic_sweep_cell(Eigen::MatrixXd& coeffs, const TensorGrid& grid,
                           const WenoParams& params, int d, int j) {
  const int width = 1 << d;  // coefficients produced by previous sweeps
  const int jm = grid.neighbor_clamped(j, d, -1);
  const int jp = grid.neighbor_clamped(j, d, +1);
  for (int k = 0; k < width; ++k) {
    const double c0 = coeffs(j, k);
    coeffs(j, width + k) =
        weno3_slope(c0 - coeffs(jm, k), coeffs(jp, k) - c0, params.epsilon);
  }
}

StochasticPolyField reconstruct_stochastic(const Eigen::VectorXd& cell_values,
                                           const TensorGrid& grid, const WenoParams& params) {
  const int ny = grid.ny();
  const int q = grid.q();
  if (cell_values.size() != ny)
    throw ConfigError("stochastic reconstruction: value count does not match grid");
  StochasticPolyField poly;
  poly.q = q;
  poly.coeffs.resize(ny, 1 << q);
  poly.coeffs.col(0) = cell_values;
  for (int d = 0; d < q; ++d) {
    if (stochastic_dim_is_constant(grid, d)) {
      const int width = 1 << d;
      poly.coeffs.middleCols(width, width).setZero();
      continue;
    }
    for (int j = 0; j < ny; ++j) stochastic_sweep_cell(poly.coeffs, grid, params, d, j);
  }
  return poly;
}

Eigen::VectorXd evaluate_poly(const StochasticPolyField& poly, const TensorGrid& grid,
                              const QuadratureSet& nodes) {
  const int total = nodes.total();
  Eigen::VectorXd out(total);
  std::vector<double> xi(std::max(poly.q, 1));
  std::vector<int> mi(std::max(poly.q, 1));
  for (int l = 0; l < total; ++l) {
    const int cell = nodes.owner[l];
    grid.multi_index(cell, mi);
    for (int d = 0; d < poly.q; ++d) {
      xi[d] = (nodes.nodes(l, d) - grid.y_center(d, mi[d])) / grid.dy(d);
      if (std::abs(xi[d]) > 0.5 + 1e-12)
        throw std::out_of_range("quadrature node outside its stochastic cell");
    }
    out[l] = poly.evaluate(cell, xi.data());
  }
  return out;
}

Eigen::MatrixXd node_eval_matrix(int q) {
  const int nn = 1 << q;  // nodes per cell and coefficients per cell alike
  const double xi_abs = 0.5 / std::sqrt(3.0);
  Eigen::MatrixXd E(nn, nn);
  for (int m = 0; m < nn; ++m) {
    for (int mask = 0; mask < nn; ++mask) {
      double v = 1.0;
      for (int d = 0; d < q; ++d) {
        if (!(mask & (1 << d))) continue;
        const bool plus_side = (m >> (q - 1 - d)) & 1;
        v *= plus_side ? xi_abs : -xi_abs;
      }
      E(m, mask) = v;
    }
  }
  return E;
}

}  // namespace sfv
