#ifndef SFV_STATS_HPP_
#define SFV_STATS_HPP_

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "sfv/grid.hpp"
#include "sfv/state.hpp"

namespace sfv {

// Per-component mean and standard deviation over the stochastic cells, per
// physical cell. U holds pdf-normalized cell averages, so the expectation is
// the measure-weighted sum.
struct FieldStats {
  std::vector<Eigen::VectorXd> mean;     // per component, length nx
  std::vector<Eigen::VectorXd> std_dev;  // per component, length nx
};

FieldStats field_stats(const StateField& U, const CellMeasures& measures);

struct ErrorReport {
  std::vector<double> per_component;  // relative L1 per component
  double aggregate = 0.0;
};

// relative L1 distance of the means, b taken as the reference:
// sum_i w_i |a_i - b_i| / sum_i w_i |b_i| per component; aggregate pools
// numerators and denominators over components.
ErrorReport relative_l1(const FieldStats& a, const FieldStats& b, const Eigen::VectorXd& widths);

// log2(err_coarse / err_fine) per doubling of per-dimension resolution;
// empty when either error is non-positive.
std::optional<double> convergence_order(double err_coarse, double err_fine);

// plain ratio err_coarse / err_fine of successive refinements
std::optional<double> error_ratio(double err_coarse, double err_fine);

// total variation sum_i |v_{i+1} - v_i| (oscillation measure for slices)
double total_variation(const Eigen::VectorXd& v);

}  // namespace sfv

#endif  // SFV_STATS_HPP_
