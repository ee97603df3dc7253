#ifndef SFV_STATE_HPP_
#define SFV_STATE_HPP_

#include <Eigen/Dense>

#include "sfv/errors.hpp"

namespace sfv {

enum class BoundaryKind { Periodic, ZeroGradient };

// Cell averages U_{i,j} for all components, stored flat with the stochastic
// index fastest: entry (p * nx + i) * ny + j. The stochastic sweeps then walk
// contiguous memory.
struct StateField {
  int n_comp = 0;
  int nx = 0;
  int ny = 0;
  Eigen::VectorXd data;

  StateField() = default;
  StateField(int n_comp_, int nx_, int ny_)
      : n_comp(n_comp_), nx(nx_), ny(ny_),
        data(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_comp_) * nx_ * ny_)) {}

  double& at(int p, int i, int j) { return data[(static_cast<Eigen::Index>(p) * nx + i) * ny + j]; }
  double at(int p, int i, int j) const {
    return data[(static_cast<Eigen::Index>(p) * nx + i) * ny + j];
  }

  // contiguous stochastic row of component p, physical cell i
  double* row(int p, int i) { return data.data() + (static_cast<Eigen::Index>(p) * nx + i) * ny; }
  const double* row(int p, int i) const {
    return data.data() + (static_cast<Eigen::Index>(p) * nx + i) * ny;
  }

  Eigen::Index size() const { return data.size(); }

  bool same_shape(const StateField& other) const {
    return n_comp == other.n_comp && nx == other.nx && ny == other.ny;
  }
};

// physical neighbor index under the given boundary treatment
inline int physical_neighbor(int i, int shift, int nx, BoundaryKind bc) {
  int k = i + shift;
  if (bc == BoundaryKind::Periodic) {
    k %= nx;
    if (k < 0) k += nx;
    return k;
  }
  if (k < 0) return 0;
  if (k >= nx) return nx - 1;
  return k;
}

}  // namespace sfv

#endif  // SFV_STATE_HPP_
