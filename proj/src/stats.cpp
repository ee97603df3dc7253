#include "sfv/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "sfv/errors.hpp"

namespace sfv {

FieldStats field_stats(const StateField& U, const CellMeasures& measures) {
  if (measures.stochastic.size() != U.ny)
    throw ConfigError("statistics: measures do not match the field's stochastic grid");
  FieldStats out;
  out.mean.assign(U.n_comp, Eigen::VectorXd(U.nx));
  out.std_dev.assign(U.n_comp, Eigen::VectorXd(U.nx));
  for (int p = 0; p < U.n_comp; ++p) {
    for (int i = 0; i < U.nx; ++i) {
      const double* row = U.row(p, i);
      double m1 = 0.0, m2 = 0.0;
      for (int j = 0; j < U.ny; ++j) {
        m1 += row[j] * measures.stochastic[j];
        m2 += row[j] * row[j] * measures.stochastic[j];
      }
      const double var = m2 - m1 * m1;
      if (var < -1e-12)
        throw std::runtime_error("negative variance estimate " + std::to_string(var));
      out.mean[p][i] = m1;
      out.std_dev[p][i] = std::sqrt(std::max(0.0, var));
    }
  }
  return out;
}

ErrorReport relative_l1(const FieldStats& a, const FieldStats& b, const Eigen::VectorXd& widths) {
  if (a.mean.size() != b.mean.size()) throw ConfigError("error report: component mismatch");
  ErrorReport report;
  double num_all = 0.0, den_all = 0.0;
  for (size_t p = 0; p < a.mean.size(); ++p) {
    if (a.mean[p].size() != b.mean[p].size() || a.mean[p].size() != widths.size())
      throw ConfigError("error report: mesh mismatch");
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < widths.size(); ++i) {
      num += widths[i] * std::abs(a.mean[p][i] - b.mean[p][i]);
      den += widths[i] * std::abs(b.mean[p][i]);
    }
    if (den == 0.0) throw ConfigError("error report: reference field has zero L1 norm");
    report.per_component.push_back(num / den);
    num_all += num;
    den_all += den;
  }
  report.aggregate = num_all / den_all;
  return report;
}

std::optional<double> convergence_order(double err_coarse, double err_fine) {
  if (!(err_coarse > 0.0) || !(err_fine > 0.0)) return std::nullopt;
  return std::log2(err_coarse / err_fine);
}

std::optional<double> error_ratio(double err_coarse, double err_fine) {
  if (!(err_coarse > 0.0) || !(err_fine > 0.0)) return std::nullopt;
  return err_coarse / err_fine;
}

double total_variation(const Eigen::VectorXd& v) {
  double tv = 0.0;
  for (Eigen::Index i = 0; i + 1 < v.size(); ++i) tv += std::abs(v[i + 1] - v[i]);
  return tv;
}

}  // namespace sfv
