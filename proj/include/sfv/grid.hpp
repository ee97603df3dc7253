#ifndef SFV_GRID_HPP_
#define SFV_GRID_HPP_

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sfv/errors.hpp"

namespace sfv {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

// Tensor-product mesh: a uniform partition of the physical interval into
// nx cells and a Cartesian partition of the stochastic box into
// ny = prod(cells_per_dim) cells. Stochastic cells are linearized row-major,
// the last dimension varying fastest; this ordering is part of the on-disk
// snapshot layout and must not change.
class TensorGrid {
 public:
  TensorGrid(Interval physical, int nx,
             std::vector<std::pair<Interval, int>> stochastic_dims);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int q() const { return static_cast<int>(dims_.size()); }

  const Interval& physical() const { return physical_; }
  double dx() const { return dx_; }
  double x_lo(int i) const { return physical_.lo + i * dx_; }
  double x_center(int i) const { return physical_.lo + (i + 0.5) * dx_; }

  const Interval& stochastic_domain(int d) const { return dims_[d].first; }
  int cells_per_dim(int d) const { return dims_[d].second; }
  double dy(int d) const { return widths_[d]; }
  double stochastic_volume() const { return volume_; }

  // row-major linearization and its inverse
  int linear_index(const std::vector<int>& mi) const;
  void multi_index(int j, std::vector<int>& mi) const;

  double y_lo(int d, int idx) const { return dims_[d].first.lo + idx * widths_[d]; }
  double y_center(int d, int idx) const { return dims_[d].first.lo + (idx + 0.5) * widths_[d]; }

  // linear index of the cell obtained by moving `shift` cells along dim d,
  // clamped to the domain (zero-gradient stochastic ghost cells)
  int neighbor_clamped(int j, int d, int shift) const;

 private:
  Interval physical_;
  int nx_;
  std::vector<std::pair<Interval, int>> dims_;
  std::vector<double> widths_;
  std::vector<int> strides_;
  int ny_;
  double dx_;
  double volume_;
};

// Probability density on the stochastic box. The uniform kind integrates to
// one over the grid's stochastic domain by construction; custom callables are
// evaluated pointwise at quadrature nodes.
class DensityFn {
 public:
  using Callable = std::function<double(const double* y, int q)>;

  static DensityFn uniform() { return DensityFn{}; }
  static DensityFn custom(Callable mu) {
    DensityFn d;
    d.mu_ = std::move(mu);
    return d;
  }

  bool is_uniform() const { return !mu_; }

  double evaluate(const double* y, const TensorGrid& grid) const {
    if (!mu_) return 1.0 / grid.stochastic_volume();
    return mu_(y, grid.q());
  }

 private:
  Callable mu_;
};

// All stochastic quadrature nodes, grouped by owning cell: the global node
// index is l = j * nodes_per_cell + m, where m runs row-major over the
// per-dimension two-point Gauss nodes (-1/sqrt3 first, last dim fastest).
struct QuadratureSet {
  Eigen::MatrixXd nodes;    // (total nodes) x q coordinates
  Eigen::VectorXd weights;  // geometric tensor weights (affine-jacobian scaled)
  Eigen::VectorXd pdf;      // mu(y_l)
  std::vector<int> owner;   // owning stochastic cell per node
  int nodes_per_cell = 1;   // 2^q

  int total() const { return static_cast<int>(weights.size()); }
  int node_index(int cell, int m) const { return cell * nodes_per_cell + m; }
};

struct CellMeasures {
  Eigen::VectorXd stochastic;  // |K_y^j|, probability mass per cell
  Eigen::VectorXd physical;    // |K_x^i|, cell length
};

QuadratureSet tensor_gauss_nodes(const TensorGrid& grid, const DensityFn& density);

// sum over the nodes of cell j of f(y_l) mu(y_l) w_l
double quadrature_integrate(const QuadratureSet& qs, const Eigen::VectorXd& node_values,
                            int cell);

CellMeasures cell_measures(const TensorGrid& grid, const QuadratureSet& qs);

}  // namespace sfv

#endif  // SFV_GRID_HPP_
