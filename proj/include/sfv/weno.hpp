#ifndef SFV_WENO_HPP_
#define SFV_WENO_HPP_

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "sfv/grid.hpp"
#include "sfv/state.hpp"

namespace sfv {

// Third-order WENO parameters. Smoothness indicators use undivided
// differences, so no mesh width enters the formulas. Linear weights are given
// per interface side of the center cell.
struct WenoParams {
  double epsilon = 1e-6;
  std::array<double, 2> d_right{2.0 / 3.0, 1.0 / 3.0};  // at x_{i+1/2}
  std::array<double, 2> d_left{1.0 / 3.0, 2.0 / 3.0};   // at x_{i-1/2}

  void validate() const;
};

struct EdgePair {
  double left;   // trace of the center cell at its left interface
  double right;  // trace of the center cell at its right interface
};

// nonlinear weights w_k = alpha_k / sum(alpha), alpha_k = d_k / (eps + beta_k)^2
std::array<double, 2> weno3_weights(double beta0, double beta1, const std::array<double, 2>& d,
                                    double epsilon);

// Both interface traces of the center cell from the 3-cell stencil
// (u_minus, u_center, u_plus). beta_0 = (u_plus - u_center)^2 weights the
// right-biased candidate, beta_1 = (u_center - u_minus)^2 the left-biased one.
EdgePair weno3_pair(double u_minus, double u_center, double u_plus, const WenoParams& params);

// Limited in-cell slope (per unit cell width) from undivided differences
// delta_minus = u0 - um, delta_plus = up - u0, with symmetric linear weights
// (1/2, 1/2). Used for the cell-interior stochastic reconstruction.
double weno3_slope(double delta_minus, double delta_plus, double epsilon);

// Left/right solution traces at every physical interface, per stochastic cell
// and component. Row k of each matrix is interface x_{k-1/2}, k = 0..nx.
struct InterfaceStates {
  std::vector<Eigen::MatrixXd> left;   // n_comp matrices, (nx+1) x ny
  std::vector<Eigen::MatrixXd> right;  // n_comp matrices, (nx+1) x ny
};

InterfaceStates reconstruct_physical(const StateField& U, BoundaryKind bc,
                                     const WenoParams& params);

// Per-cell multilinear polynomial over the stochastic grid, in normalized
// cell-local coordinates xi_d = (y_d - center_d) / dy_d in [-1/2, 1/2].
// coeffs(j, mask) multiplies prod_{d : mask bit d set} xi_d.
struct StochasticPolyField {
  int q = 0;
  Eigen::MatrixXd coeffs;  // ny x 2^q

  double evaluate(int cell, const double* xi) const;
};

// One cell of the dim-d sweep: writes coeffs(j, 2^d .. 2^{d+1}-1), the limited
// slopes of the level-d coefficients, reading the dim-d neighbors (clamped =
// zero-gradient stochastic ghosts). Shared by the full reconstruction and the
// hyper-reduced restricted evaluation so both produce identical numbers.
void stochastic_sweep_cell(Eigen::MatrixXd& coeffs, const TensorGrid& grid,
                           const WenoParams& params, int d, int j);

// True (with a once-per-process warning) when dimension d has fewer than 3
// cells and falls back to piecewise-constant reconstruction.
bool stochastic_dim_is_constant(const TensorGrid& grid, int d);

// Dimension-by-dimension WENO sweep over the stochastic tensor grid: each
// sweep limits an in-cell slope per existing coefficient, doubling the
// coefficient count, with zero-gradient ghost cells at the stochastic
// boundary. Dimensions with fewer than 3 cells fall back to piecewise-constant
// reconstruction (warned once per process).
StochasticPolyField reconstruct_stochastic(const Eigen::VectorXd& cell_values,
                                           const TensorGrid& grid, const WenoParams& params);

// Evaluate at every quadrature node (size nodes.total()); a node outside its
// owner cell (normalized coordinate beyond 1/2 + 1e-12) throws std::out_of_range.
Eigen::VectorXd evaluate_poly(const StochasticPolyField& poly, const TensorGrid& grid,
                              const QuadratureSet& nodes);

// Evaluation matrix for the 2^q tensor Gauss nodes shared by every cell:
// E(m, mask) = prod_{d in mask} xi_d(m) with xi = +-1/(2 sqrt 3), node bit
// (q-1-d) of m selecting the dim-d side (minus first). Node values of a cell
// are E * coeffs.row(cell)^T; both the full and hyper-reduced evaluation paths
// go through this one matrix so selected rows match bit-for-bit.
Eigen::MatrixXd node_eval_matrix(int q);

// Polynomial value at in-cell node m of `cell`. Every evaluation path uses
// this one scalar loop so that restricted evaluations reproduce full ones
// exactly.
inline double eval_node(const Eigen::MatrixXd& E, const Eigen::MatrixXd& coeffs, int cell,
                        int m) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < E.cols(); ++k) acc += E(m, k) * coeffs(cell, k);
  return acc;
}

}  // namespace sfv

#endif  // SFV_WENO_HPP_
