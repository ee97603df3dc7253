#include "sfv/rom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sfv/errors.hpp"

namespace sfv {

void SnapshotMatrix::validate() const {
  if (static_cast<Eigen::Index>(columns.size()) != values.cols())
    throw ConfigError("snapshot metadata does not match column count");
  if (nx <= 0 || n_comp <= 0) throw ConfigError("snapshot matrix missing shape metadata");
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    bool any_finite = false;
    for (Eigen::Index r = 0; r < values.rows() && !any_finite; ++r)
      any_finite = !std::isnan(values(r, c));
    if (!any_finite) throw ConfigError("snapshot column of all-NaN values");
  }
}

PodBasis compute_pod(const SnapshotMatrix& snap, int N) {
  const Eigen::Index rows = snap.values.rows(), cols = snap.values.cols();
  if (N < 1 || N > std::min(rows, cols))
    throw ConfigError("mode count must lie in [1, min(snapshot dimensions)]");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(snap.values, Eigen::ComputeThinU);
  const Eigen::VectorXd& sigma = svd.singularValues();
  int rank = 0;
  while (rank < sigma.size() && sigma[rank] >= 1e-14 * sigma[0]) ++rank;
  if (N > rank)
    throw ConfigError("requested " + std::to_string(N) + " modes but numerical rank is " +
                      std::to_string(rank));
  PodBasis basis;
  basis.V = svd.matrixU().leftCols(N);
  basis.singular_values = sigma;
  for (int k = 0; k < N; ++k) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double a = std::abs(basis.V(r, k));
      if (a > best) {  // strict: ties keep the lowest index
        best = a;
        arg = r;
      }
    }
    if (basis.V(arg, k) < 0.0) basis.V.col(k) = -basis.V.col(k);
  }
  return basis;
}

FaceIntegralMatrix build_face_integrals(const PodBasis& basis, const QuadratureSet& qs) {
  const int total = qs.total();
  if (basis.V.rows() != total)
    throw ConfigError("basis row count does not match quadrature node count");
  const int ny = total / qs.nodes_per_cell;
  FaceIntegralMatrix out;
  out.B = Eigen::MatrixXd::Zero(ny, basis.modes());
  for (int k = 0; k < basis.modes(); ++k)
    for (int l = 0; l < total; ++l)
      out.B(qs.owner[l], k) += basis.V(l, k) * qs.pdf[l] * qs.weights[l];
  return out;
}

Eigen::MatrixXd least_squares_coefficients(const Eigen::MatrixXd& V, const Eigen::MatrixXd& F) {
  if (V.rows() != F.rows()) throw ConfigError("least squares: row mismatch");
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(V);
  if (cod.rank() < V.cols()) throw ConfigError("least squares: basis is rank-deficient");
  return cod.solve(F);
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& A) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double tol =
      sigma.size() == 0 ? 0.0 : std::max(A.rows(), A.cols()) * sigma[0] * 1e-14;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma[k] > tol) inv[k] = 1.0 / sigma[k];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

std::vector<int> pivoted_qr_permutation(const Eigen::MatrixXd& A_in) {
  Eigen::MatrixXd A = A_in;
  const Eigen::Index rows = A.rows(), cols = A.cols();
  std::vector<int> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);
  const Eigen::Index steps = std::min(rows, cols);
  for (Eigen::Index s = 0; s < steps; ++s) {
    const Eigen::Index len = rows - s;
    Eigen::Index piv = s;
    double best = A.col(s).tail(len).squaredNorm();
    for (Eigen::Index c = s + 1; c < cols; ++c) {
      const double nc = A.col(c).tail(len).squaredNorm();
      if (nc > best * (1.0 + 1e-14)) {  // ties keep the lowest index
        best = nc;
        piv = c;
      }
    }
    if (best <= 0.0) break;  // residual exactly zero: remaining order stands
    if (piv != s) {
      A.col(s).swap(A.col(piv));
      std::swap(perm[s], perm[piv]);
    }
    // Householder reflector for column s
    Eigen::VectorXd v = A.col(s).tail(len);
    const double alpha = v.norm() * (v[0] >= 0.0 ? -1.0 : 1.0);
    v[0] -= alpha;
    const double vnorm2 = v.squaredNorm();
    if (vnorm2 > 0.0) {
      for (Eigen::Index c = s; c < cols; ++c) {
        const double proj = v.dot(A.col(c).tail(len)) * 2.0 / vnorm2;
        A.col(c).tail(len) -= proj * v;
      }
    }
  }
  return perm;
}

HyperReductionIndex qdeim_select(const PodBasis& basis, int n_hyper, const TensorGrid& grid) {
  const int total = static_cast<int>(basis.V.rows());
  if (n_hyper < basis.modes() || n_hyper > total)
    throw ConfigError("hyper-reduction point count must lie in [modes, node count]");
  const std::vector<int> perm = pivoted_qr_permutation(basis.V.transpose());
  HyperReductionIndex index;
  index.nodes.assign(perm.begin(), perm.begin() + n_hyper);

  const int nn = 1 << grid.q();
  std::set<int> owners;
  for (int l : index.nodes) owners.insert(l / nn);

  index.need.assign(grid.q() + 1, {});
  index.need[grid.q()].assign(owners.begin(), owners.end());
  for (int d = grid.q() - 1; d >= 0; --d) {
    std::set<int> grown(index.need[d + 1].begin(), index.need[d + 1].end());
    for (int j : index.need[d + 1]) {
      grown.insert(grid.neighbor_clamped(j, d, -1));
      grown.insert(grid.neighbor_clamped(j, d, +1));
    }
    index.need[d].assign(grown.begin(), grown.end());
  }
  index.closure = index.need[0];
  return index;
}

RomOperator::RomOperator(const SfvOperator& fom, PodBasis basis, FaceIntegralMatrix face)
    : fom_(&fom), basis_(std::move(basis)), face_(std::move(face)) {
  if (basis_.V.rows() != fom.quadrature().total())
    throw ConfigError("basis does not match the operator's quadrature set");
  if (face_.B.rows() != fom.grid().ny() || face_.B.cols() != basis_.modes())
    throw ConfigError("face-integral matrix shape does not match basis");
  const Eigen::MatrixXd gram = basis_.V.transpose() * basis_.V;
  const double dev =
      (gram - Eigen::MatrixXd::Identity(basis_.modes(), basis_.modes())).cwiseAbs().maxCoeff();
  if (dev > 1e-10) throw ConfigError("basis columns are not orthonormal");
}

void RomOperator::rhs(const StateField& U, StateField& dUdt) const {
  ++fom_->counters().rhs_calls;
  const int n = fom_->law().n_components;
  const FluxTrace trace = fom_->flux_trace(U);
  std::vector<Eigen::MatrixXd> fbar(n);
  for (int p = 0; p < n; ++p) {
    // orthonormal columns: V^+ = V^T
    const Eigen::MatrixXd coeff = basis_.V.transpose() * trace.values[p];
    fbar[p] = (face_.B * coeff).transpose();
  }
  fom_->assemble_rhs(fbar, dUdt);
}

void RomOperator::set_hyper_reduction(HyperReductionIndex index) {
  const int total = fom_->quadrature().total();
  std::set<int> seen;
  for (int l : index.nodes) {
    if (l < 0 || l >= total) throw ConfigError("hyper-reduction index out of range");
    if (!seen.insert(l).second) throw ConfigError("duplicate hyper-reduction index");
  }
  if (static_cast<int>(index.nodes.size()) < basis_.modes())
    throw ConfigError("hyper-reduction needs at least as many points as modes");
  Eigen::MatrixXd selected(index.nodes.size(), basis_.modes());
  for (size_t r = 0; r < index.nodes.size(); ++r) selected.row(r) = basis_.V.row(index.nodes[r]);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(selected);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma[sigma.size() - 1] <=
      std::max(selected.rows(), selected.cols()) * sigma[0] * 1e-14)
    throw ConfigError("selected basis rows are rank-deficient");
  selected_pinv_ = pseudo_inverse(selected);
  index_ = std::move(index);
  hr_ready_ = true;
}

void RomOperator::hyper_reduced_rhs(const StateField& U, StateField& dUdt) const {
  if (!hr_ready_) throw ConfigError("hyper-reduction index not set");
  ++fom_->counters().rhs_calls;
  const TensorGrid& grid = fom_->grid();
  const QuadratureSet& qs = fom_->quadrature();
  const WenoParams& weno = fom_->weno();
  const Eigen::MatrixXd& E = fom_->node_matrix();
  const int n = fom_->law().n_components;
  const int nx = grid.nx();
  const int q = grid.q();
  const int nn = qs.nodes_per_cell;
  const int n_sel = static_cast<int>(index_.nodes.size());

  // numerical fluxes only on the stencil closure of the selected rows
  const std::vector<Eigen::MatrixXd> G = fom_->interface_cell_fluxes(U, index_.closure);

  Eigen::MatrixXd coeffs(grid.ny(), 1 << q);
  Eigen::MatrixXd selected(n_sel, nx + 1);
  std::vector<Eigen::MatrixXd> fbar(n);
  for (int p = 0; p < n; ++p) {
    for (int k = 0; k <= nx; ++k) {
      for (int j : index_.closure) coeffs(j, 0) = G[p](j, k);
      for (int d = 0; d < q; ++d) {
        if (stochastic_dim_is_constant(grid, d)) {
          const int width = 1 << d;
          for (int j : index_.need[d + 1]) coeffs.block(j, width, 1, width).setZero();
          continue;
        }
        for (int j : index_.need[d + 1]) stochastic_sweep_cell(coeffs, grid, weno, d, j);
      }
      for (int r = 0; r < n_sel; ++r) {
        const int l = index_.nodes[r];
        selected(r, k) = eval_node(E, coeffs, l / nn, l % nn);
      }
    }
    fbar[p] = (face_.B * (selected_pinv_ * selected)).transpose();
  }
  fom_->assemble_rhs(fbar, dUdt);
}

}  // namespace sfv
