#pragma once

// Interpretation of a decomposition: how much of the cloud each axis keeps
// (axis shares), how well each item is represented, and the rank needed to
// reach a prescribed accuracy.

#include <string>
#include <vector>

#include "dimred/error.hpp"
#include "dimred/types.hpp"

namespace dimred {

struct QualityReport {
  Vector axis_share;        // share of axis j in the total spectrum
  Vector cumulative_share;  // running sum of axis shares
  Matrix item_axis;         // quality of item i on axis j (rows sum to 1)
  Matrix item_cumulative;   // quality of item i on the first r axes
  std::vector<Index> degenerate_items;  // items with zero coordinates
  bool spectrum_complete = true;  // false: shares divide by a truncated total
                                  // (lower-bounded denominator, optimistic)
};

/// Quality metrics for a decomposition. full_lambda is the complete spectrum
/// when available; after sketching only the computed part exists, in which
/// case pass spectrum_complete = false so the report flags its shares as
/// optimistic. An item with all-zero coordinates gets quality 0 and is
/// listed in degenerate_items instead of producing NaN.
inline QualityReport quality_metrics(const PcaResult& result, const Vector& full_lambda,
                                     bool spectrum_complete = true) {
  QualityReport report;
  report.spectrum_complete = spectrum_complete;

  const Index k = result.eigenvalues.size();
  const Index n = result.components.rows();
  const double total = full_lambda.sum();

  report.axis_share = Vector::Zero(k);
  if (total > 0.0) {
    report.axis_share = result.eigenvalues.head(k) / total;
  }
  report.cumulative_share = Vector(k);
  double running = 0.0;
  for (Index j = 0; j < k; ++j) {
    running += report.axis_share[j];
    report.cumulative_share[j] = running;
  }

  report.item_axis = Matrix::Zero(n, k);
  report.item_cumulative = Matrix::Zero(n, k);
  for (Index i = 0; i < n; ++i) {
    const double row_norm2 = result.components.row(i).squaredNorm();
    if (row_norm2 <= 0.0) {
      report.degenerate_items.push_back(i);
      continue;
    }
    double acc = 0.0;
    for (Index j = 0; j < k; ++j) {
      const double psi = result.components(i, j) * result.components(i, j) / row_norm2;
      report.item_axis(i, j) = psi;
      acc += psi;
      report.item_cumulative(i, j) = acc;
    }
  }
  return report;
}

/// Smallest rank r whose cumulative share reaches the target accuracy.
/// The spectrum must be descending, nonnegative and not sum to zero.
inline Index rank_for_accuracy(const Vector& lambda, double target) {
  if (!(target > 0.0) || target > 1.0) {
    throw BadRankError("rank_for_accuracy: target must lie in (0, 1]");
  }
  if (lambda.size() == 0) {
    throw EmptySpectrumError("rank_for_accuracy: empty spectrum");
  }
  const double total = lambda.sum();
  if (!(total > 0.0)) {
    throw EmptySpectrumError("rank_for_accuracy: spectrum sums to zero");
  }
  double running = 0.0;
  for (Index r = 0; r < lambda.size(); ++r) {
    running += lambda[r];
    if (running / total >= target) {
      return r + 1;
    }
  }
  return lambda.size();  // cumulative share is 1 at full rank
}

}  // namespace dimred
