#pragma once

// Correspondence Analysis of a contingency table: normalize to frequencies,
// center by the independence model, standardize by the margin roots,
// decompose, and map back to row/column factor coordinates. The total
// spectrum equals the chi-square of the table (per-frequency scale).

#include <cmath>
#include <string>
#include <utility>

#include "dimred/backend.hpp"
#include "dimred/pca.hpp"
#include "dimred/types.hpp"

namespace dimred {

/// A table of nonnegative counts with strictly positive margins. Non-integer
/// entries are accepted: the analysis only needs nonnegativity, and
/// pre-aggregated frequency tables are common.
class ContingencyTable {
 public:
  explicit ContingencyTable(Matrix counts) : counts_(std::move(counts)) {
    detail::require_finite(counts_, "ContingencyTable");
    for (Index i = 0; i < counts_.rows(); ++i) {
      for (Index j = 0; j < counts_.cols(); ++j) {
        if (counts_(i, j) < 0.0) {
          throw NegativeCountError("ContingencyTable: negative count at (" + std::to_string(i) +
                                   "," + std::to_string(j) + ")");
        }
      }
    }
    for (Index i = 0; i < counts_.rows(); ++i) {
      if (!(counts_.row(i).sum() > 0.0)) {
        throw EmptyMarginError(EmptyMarginError::Axis::Row, i,
                               "ContingencyTable: row " + std::to_string(i) + " is all zero");
      }
    }
    for (Index j = 0; j < counts_.cols(); ++j) {
      if (!(counts_.col(j).sum() > 0.0)) {
        throw EmptyMarginError(EmptyMarginError::Axis::Column, j,
                               "ContingencyTable: column " + std::to_string(j) + " is all zero");
      }
    }
  }

  const Matrix& counts() const { return counts_; }
  double grand_total() const { return counts_.sum(); }

  /// Frequencies A = T / T_++.
  Matrix frequencies() const { return counts_ / grand_total(); }

 private:
  Matrix counts_;
};

namespace detail {

/// Standardized residuals (alpha_ij - r_i c_j) / sqrt(r_i c_j) together with
/// the margins of the frequency table.
struct StandardizedResiduals {
  Matrix values;
  Vector row_margins;
  Vector col_margins;
};

inline StandardizedResiduals standardized_residuals(const ContingencyTable& t) {
  StandardizedResiduals out;
  const Matrix alpha = t.frequencies();
  out.row_margins = alpha.rowwise().sum();
  out.col_margins = alpha.colwise().sum();
  out.values = Matrix(alpha.rows(), alpha.cols());
  for (Index i = 0; i < alpha.rows(); ++i) {
    for (Index j = 0; j < alpha.cols(); ++j) {
      const double expected = out.row_margins[i] * out.col_margins[j];
      out.values(i, j) = (alpha(i, j) - expected) / std::sqrt(expected);
    }
  }
  return out;
}

}  // namespace detail

struct CoaResult {
  Matrix row_coords;   // I x k
  Matrix col_coords;   // J x k
  Vector lambda;       // descending, sums to chi2_norm for a full-rank backend
  Vector row_margins;  // r, sums to 1
  Vector col_margins;  // c, sums to 1
  double chi2_norm = 0.0;  // squared norm of the standardized residuals
};

/// Correspondence Analysis. The standardized residual matrix is decomposed
/// with pca_core; coordinates are the margin-root back-transport of the
/// components (rows) and axes (columns), so that the margin-weighted
/// barycenter of each factor is zero.
inline CoaResult coa(const ContingencyTable& t, const PcaMethod& method = {}) {
  const auto sr = detail::standardized_residuals(t);
  PcaResult inner = pca_core(sr.values, method);

  CoaResult out;
  out.lambda = std::move(inner.eigenvalues);
  out.row_margins = sr.row_margins;
  out.col_margins = sr.col_margins;
  out.chi2_norm = sr.values.squaredNorm();
  out.row_coords = sr.row_margins.cwiseSqrt().cwiseInverse().asDiagonal() * inner.components;
  out.col_coords = sr.col_margins.cwiseSqrt().cwiseInverse().asDiagonal() * inner.axes;
  return out;
}

struct ChiSquareStat {
  double frequency_scale = 0.0;  // sum (alpha_ij - r_i c_j)^2 / (r_i c_j)
  double count_scale = 0.0;      // the classical statistic: frequency_scale * T_++
};

/// Chi-square distance of the table to its independence model, on both the
/// per-frequency scale (equal to the CoA spectrum total) and the count scale.
inline ChiSquareStat chi_square(const ContingencyTable& t) {
  const auto sr = detail::standardized_residuals(t);
  ChiSquareStat stat;
  stat.frequency_scale = sr.values.squaredNorm();
  stat.count_scale = stat.frequency_scale * t.grand_total();
  return stat;
}

/// Pairwise chi-square distances between row profiles:
/// d(i, i')^2 = sum_j (1/c_j) (alpha_ij/r_i - alpha_i'j/r_i')^2.
/// Proportional rows are at distance zero (distributional equivalence).
inline Matrix row_profile_distances(const ContingencyTable& t) {
  const Matrix alpha = t.frequencies();
  const Vector r = alpha.rowwise().sum();
  const Vector c = alpha.colwise().sum();
  const Matrix profiles = r.cwiseInverse().asDiagonal() * alpha;
  const Index n = alpha.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index k = i + 1; k < n; ++k) {
      double s = 0.0;
      for (Index j = 0; j < alpha.cols(); ++j) {
        const double diff = profiles(i, j) - profiles(k, j);
        s += diff * diff / c[j];
      }
      d(i, k) = d(k, i) = std::sqrt(s);
    }
  }
  return d;
}

}  // namespace dimred
