#ifndef SFV_ROM_HPP_
#define SFV_ROM_HPP_

#include <Eigen/Dense>
#include <vector>

#include "sfv/solver.hpp"

namespace sfv {

struct SnapshotColumn {
  int frame;      // 0-based frame index
  int component;  // conserved-variable index
  int interface;  // unique interface index k (x_{k-1/2}), 0..nx
};

// Flux snapshots at all quadrature nodes: one column per (frame, component,
// unique interface) after interior-duplicate removal; row l is global node l.
struct SnapshotMatrix {
  Eigen::MatrixXd values;  // (nq*ny) x (frames*n_comp*(nx+1))
  std::vector<SnapshotColumn> columns;
  std::vector<double> frame_times;
  int nx = 0;
  int n_comp = 0;

  void validate() const;  // metadata/shape coherence, no all-NaN column
};

struct PodBasis {
  Eigen::MatrixXd V;                // (nq*ny) x N, orthonormal columns
  Eigen::VectorXd singular_values;  // full spectrum of the snapshot matrix
  int modes() const { return static_cast<int>(V.cols()); }
};

// Thin SVD of the snapshots; V keeps the leading N left singular vectors with
// a fixed sign convention (largest-magnitude entry positive, ties -> lowest
// index). Throws when N exceeds the numerical rank (sigma_N/sigma_1 < 1e-14).
PodBasis compute_pod(const SnapshotMatrix& snap, int N);

// B(j, k) = sum over the nodes of stochastic cell j of V(l,k) pdf(l) w(l):
// per-cell pdf-weighted integrals of each basis mode.
struct FaceIntegralMatrix {
  Eigen::MatrixXd B;  // ny x N
};

FaceIntegralMatrix build_face_integrals(const PodBasis& basis, const QuadratureSet& qs);

// Minimum-norm least-squares solution argmin_C ||V C - F||_F (per column);
// throws on rank-deficient V.
Eigen::MatrixXd least_squares_coefficients(const Eigen::MatrixXd& V, const Eigen::MatrixXd& F);

// Moore-Penrose pseudoinverse via SVD with rank tolerance max(dims)*sigma_1*1e-14.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& A);

// Column order chosen by Householder QR with column pivoting: at each step the
// remaining column of largest norm (ties within 1e-14 relative -> lowest
// index); after min(rows, cols) steps the unprocessed columns follow in their
// post-swap order.
std::vector<int> pivoted_qr_permutation(const Eigen::MatrixXd& A);

// Q-DEIM node selection plus the stochastic-cell sets needed to evaluate the
// selected rows: need[d] holds the cells whose level-d reconstruction
// coefficients are required (need[q] = owner cells of the selected nodes,
// each lower level expands by the dim-(d) stencil); closure = need[0].
struct HyperReductionIndex {
  std::vector<int> nodes;              // N_H global node indices in pivot order
  std::vector<int> closure;            // sorted unique stochastic cells
  std::vector<std::vector<int>> need;  // q+1 sorted levels
};

HyperReductionIndex qdeim_select(const PodBasis& basis, int n_hyper, const TensorGrid& grid);

// Reduced-order operator: replaces the per-cell flux quadrature of the flux
// reconstruction variant with basis-projected face integrals
// F-bar = (B V^+ F-tilde)^T, optionally evaluated only at Q-DEIM-selected rows.
class RomOperator {
 public:
  RomOperator(const SfvOperator& fom, PodBasis basis, FaceIntegralMatrix face);

  const PodBasis& basis() const { return basis_; }
  const FaceIntegralMatrix& face() const { return face_; }
  const HyperReductionIndex& index() const { return index_; }
  bool has_hyper_reduction() const { return hr_ready_; }

  void rhs(const StateField& U, StateField& dUdt) const;

  void set_hyper_reduction(HyperReductionIndex index);
  void hyper_reduced_rhs(const StateField& U, StateField& dUdt) const;

 private:
  const SfvOperator* fom_;
  PodBasis basis_;
  FaceIntegralMatrix face_;
  HyperReductionIndex index_;
  Eigen::MatrixXd selected_pinv_;  // pinv of V[I,:], N x N_H
  bool hr_ready_ = false;
};

}  // namespace sfv

#endif  // SFV_ROM_HPP_
