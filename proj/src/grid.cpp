#include "sfv/grid.hpp"

#include <cmath>

namespace sfv {

TensorGrid::TensorGrid(Interval physical, int nx,
                       std::vector<std::pair<Interval, int>> stochastic_dims)
    : physical_(physical), nx_(nx), dims_(std::move(stochastic_dims)) {
  if (nx_ < 3) throw ConfigError("nx must be at least 3 (reconstruction stencil)");
  if (!(physical_.lo < physical_.hi)) throw ConfigError("degenerate physical interval");
  dx_ = physical_.length() / nx_;

  ny_ = 1;
  volume_ = 1.0;
  widths_.reserve(dims_.size());
  for (const auto& [iv, count] : dims_) {
    if (count < 1) throw ConfigError("stochastic cell count must be positive");
    if (!(iv.lo < iv.hi)) throw ConfigError("degenerate stochastic interval");
    widths_.push_back(iv.length() / count);
    ny_ *= count;
    volume_ *= iv.length();
  }
  // row-major strides: last dimension fastest
  strides_.assign(dims_.size(), 1);
  for (int d = static_cast<int>(dims_.size()) - 2; d >= 0; --d)
    strides_[d] = strides_[d + 1] * dims_[d + 1].second;
}

int TensorGrid::linear_index(const std::vector<int>& mi) const {
  int j = 0;
  for (size_t d = 0; d < dims_.size(); ++d) j += mi[d] * strides_[d];
  return j;
}

void TensorGrid::multi_index(int j, std::vector<int>& mi) const {
  mi.resize(dims_.size());
  for (size_t d = 0; d < dims_.size(); ++d) {
    mi[d] = j / strides_[d];
    j -= mi[d] * strides_[d];
  }
}

int TensorGrid::neighbor_clamped(int j, int d, int shift) const {
  int idx = (j / strides_[d]) % dims_[d].second;
  int shifted = idx + shift;
  if (shifted < 0) shifted = 0;
  if (shifted >= dims_[d].second) shifted = dims_[d].second - 1;
  return j + (shifted - idx) * strides_[d];
}

QuadratureSet tensor_gauss_nodes(const TensorGrid& grid, const DensityFn& density) {
  const int q = grid.q();
  const int npc = 1 << q;
  const int total = npc * grid.ny();
  const double gauss = 1.0 / std::sqrt(3.0);  // reference nodes +-1/sqrt(3), weights 1

  QuadratureSet qs;
  qs.nodes.resize(total, q);
  qs.weights.resize(total);
  qs.pdf.resize(total);
  qs.owner.resize(total);
  qs.nodes_per_cell = npc;

  std::vector<int> mi;
  std::vector<double> y(std::max(q, 1));
  for (int j = 0; j < grid.ny(); ++j) {
    grid.multi_index(j, mi);
    for (int m = 0; m < npc; ++m) {
      const int l = j * npc + m;
      double w = 1.0;
      for (int d = 0; d < q; ++d) {
        // bit (q-1-d) of m selects the node in dim d: last dim fastest
        const int side = (m >> (q - 1 - d)) & 1;
        const double half = 0.5 * grid.dy(d);
        y[d] = grid.y_center(d, mi[d]) + (side ? gauss : -gauss) * half;
        w *= half;  // affine jacobian; reference weight is 1
        qs.nodes(l, d) = y[d];
      }
      qs.weights[l] = w;
      qs.pdf[l] = density.evaluate(y.data(), grid);
      qs.owner[l] = j;
    }
  }
  return qs;
}

double quadrature_integrate(const QuadratureSet& qs, const Eigen::VectorXd& node_values,
                            int cell) {
  double sum = 0.0;
  for (int m = 0; m < qs.nodes_per_cell; ++m) {
    const int l = qs.node_index(cell, m);
    sum += node_values[l] * qs.pdf[l] * qs.weights[l];
  }
  return sum;
}

CellMeasures cell_measures(const TensorGrid& grid, const QuadratureSet& qs) {
  CellMeasures m;
  m.stochastic.resize(grid.ny());
  for (int j = 0; j < grid.ny(); ++j) {
    double mass = 0.0;
    for (int k = 0; k < qs.nodes_per_cell; ++k) {
      const int l = qs.node_index(j, k);
      mass += qs.pdf[l] * qs.weights[l];
    }
    if (!(mass > 0.0))
      throw ConfigError("non-positive stochastic cell measure at cell " + std::to_string(j) +
                        " (density invalid on cell)");
    m.stochastic[j] = mass;
  }
  m.physical = Eigen::VectorXd::Constant(grid.nx(), grid.dx());
  return m;
}

}  // namespace sfv
