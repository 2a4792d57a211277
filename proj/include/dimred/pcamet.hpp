#pragma once

// PCA under SPD inner products on the row and column spaces. The metric
// problem is transported to a plain one by the isometry A -> M A Q (M, Q the
// metric square roots), decomposed there, and transported back with the
// stored inverse roots, never a general solve.

#include <string>

#include "dimred/backend.hpp"
#include "dimred/pca.hpp"
#include "dimred/types.hpp"

namespace dimred {

namespace detail {

inline void require_metric_dims(const Matrix& a, const SpdFactor& n, const SpdFactor& p,
                                const char* who) {
  if (n.dim() != a.rows() || p.dim() != a.cols()) {
    throw DimensionMismatchError(std::string(who) + ": metrics are " + std::to_string(n.dim()) +
                                 "x" + std::to_string(n.dim()) + " / " + std::to_string(p.dim()) +
                                 "x" + std::to_string(p.dim()) + " for a " +
                                 std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                 " matrix");
  }
}

}  // namespace detail

/// PCA of a with inner products n on rows and p on columns: decompose
/// B = M A Q, then transport back Y = M^-1 W, V = Q^-1 X. The axes are
/// p-orthonormal (V^T P V = I) and satisfy A^T N A P v = lambda v.
inline PcaResult pca_met(const Matrix& a, const SpdFactor& n, const SpdFactor& p,
                         const PcaMethod& method = {}) {
  detail::require_metric_dims(a, n, p, "pca_met");
  const Matrix b = n.apply_sqrt_left(p.apply_sqrt_right(a));
  PcaResult inner = pca_core(b, method);
  PcaResult out;
  out.eigenvalues = std::move(inner.eigenvalues);
  out.components = n.apply_inv_sqrt_left(inner.components);
  out.axes = p.apply_inv_sqrt_left(inner.axes);
  return out;
}

struct WeightedCenteredMatrix {
  Matrix matrix;  // weighted column sums are zero
  Vector mean;    // weighted barycenter g
};

/// Center the row cloud at its weighted barycenter
/// g = (sum_i w_i a_i) / (sum_i w_i) with strictly positive row weights.
inline WeightedCenteredMatrix weighted_center(const Matrix& a, const Vector& row_weights) {
  detail::require_finite(a, "weighted_center");
  if (row_weights.size() != a.rows()) {
    throw DimensionMismatchError("weighted_center: got " + std::to_string(row_weights.size()) +
                                 " weights for " + std::to_string(a.rows()) + " rows");
  }
  if (!row_weights.allFinite() || (row_weights.array() <= 0.0).any()) {
    throw NotSpdError("weighted_center: row weights must be strictly positive and finite");
  }
  WeightedCenteredMatrix out;
  out.mean = (a.transpose() * row_weights) / row_weights.sum();
  out.matrix = a.rowwise() - out.mean.transpose();
  return out;
}

/// Norm of a in the transported geometry: ||M A Q|| (Frobenius).
inline double transport_norm(const Matrix& a, const SpdFactor& n, const SpdFactor& p) {
  detail::require_metric_dims(a, n, p, "transport_norm");
  return n.apply_sqrt_left(p.apply_sqrt_right(a)).norm();
}

}  // namespace dimred
