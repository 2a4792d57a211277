#pragma once

// The waist of every pipeline: pca_core with a pluggable backend, plus the
// standard pre-treatments (centering, column scaling, double averaging).

#include <string>
#include <utility>

#include "dimred/backend.hpp"
#include "dimred/error.hpp"
#include "dimred/types.hpp"

namespace dimred {

namespace detail {

inline void truncate_result(PcaResult& r, Index k) {
  r.components = r.components.leftCols(k).eval();
  r.eigenvalues = r.eigenvalues.head(k).eval();
  r.axes = r.axes.leftCols(k).eval();
}

}  // namespace detail

/// Principal component analysis of a matrix, dispatching on the requested
/// backend:
///   Evd  - eigendecomposition of C = A^T A, then Y = A V;
///   Svd  - thin SVD of A, lambda = sigma^2, Y = U Sigma;
///   Grp  - randomized SVD, same recombination, prescribed rank required.
/// A finite rank keeps the first k components, eigenvalues and axes.
inline PcaResult pca_core(const Matrix& a, const PcaMethod& method = {}) {
  detail::require_finite(a, "pca_core");
  const Index min_np = std::min(a.rows(), a.cols());
  if (method.rank && (*method.rank < 1 || *method.rank > min_np)) {
    throw BadRankError("pca_core: rank must lie in [1, min(n,p)], got " +
                       std::to_string(*method.rank));
  }

  PcaResult result;
  switch (method.backend) {
    case SvdBackend::Evd: {
      const Matrix c = a.transpose() * a;
      auto [values, vectors] = sym_evd(c);
      result.eigenvalues = values.cwiseMax(0.0);  // clip rounding below zero
      result.axes = std::move(vectors);
      result.components = a * result.axes;
      if (method.rank) detail::truncate_result(result, *method.rank);
      break;
    }
    case SvdBackend::Svd: {
      SvdResult svd = svd_exact(a);
      result.eigenvalues = svd.sigma.array().square();
      result.components = svd.u * svd.sigma.asDiagonal();
      result.axes = std::move(svd.v);
      if (method.rank) detail::truncate_result(result, *method.rank);
      break;
    }
    case SvdBackend::Grp: {
      if (!method.rank) {
        throw BadRankError("pca_core: the grp backend needs a prescribed rank");
      }
      SvdResult svd = svd_grp(a, *method.rank, method.oversampling, method.seed);
      result.eigenvalues = svd.sigma.array().square();
      result.components = svd.u * svd.sigma.asDiagonal();
      result.axes = std::move(svd.v);
      break;
    }
  }
  return result;
}

/// A matrix translated to its column barycenter, plus the barycenter itself.
struct CenteredMatrix {
  Matrix matrix;  // column sums are zero
  Vector mean;    // g, one entry per column
};

/// Translate the row cloud to its barycenter: g_j = mean of column j.
inline CenteredMatrix center(const Matrix& a) {
  detail::require_finite(a, "center");
  CenteredMatrix out;
  out.mean = a.colwise().mean();
  out.matrix = a.rowwise() - out.mean.transpose();
  return out;
}

/// Divide every column by its Euclidean norm. A column whose norm falls
/// below 1e-12 sqrt(n) max|a| throws ZeroColumn naming the offender: after
/// centering this is a constant variable the caller must drop.
inline Matrix scale_columns(const Matrix& a) {
  detail::require_finite(a, "scale_columns");
  const double tol =
      1e-12 * std::sqrt(static_cast<double>(a.rows())) * a.cwiseAbs().maxCoeff();
  Matrix out(a.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    const double norm = a.col(j).norm();
    if (norm <= tol) {
      throw ZeroColumnError(j, "scale_columns: column " + std::to_string(j) +
                                   " has zero norm; drop the constant column or skip scaling");
    }
    out.col(j) = a.col(j) / norm;
  }
  return out;
}

/// Scaled-centered PCA: center, scale to unit column norms, decompose.
/// The decomposed matrix holds correlations, so the eigenvalues sum to p.
inline PcaResult pca_scaled_centered(const Matrix& a, const PcaMethod& method = {}) {
  return pca_core(scale_columns(center(a).matrix), method);
}

/// Additive decomposition a_ij = m + x_i + y_j + r_ij with zero-sum effects
/// and residuals whose every row and column sums to zero.
struct BicenterDecomposition {
  double global_mean = 0.0;
  Vector row_effects;  // x, sums to zero
  Vector col_effects;  // y, sums to zero
  Matrix residuals;    // r, doubly centered
};

/// Double averaging: fit the additive model and return effects + residuals.
inline BicenterDecomposition bicenter(const Matrix& a) {
  detail::require_finite(a, "bicenter");
  BicenterDecomposition out;
  out.global_mean = a.mean();
  out.row_effects = a.rowwise().mean().array() - out.global_mean;
  out.col_effects = a.colwise().mean().array() - out.global_mean;
  out.residuals = a;
  out.residuals.array() -= out.global_mean;
  out.residuals.colwise() -= out.row_effects;
  out.residuals.rowwise() -= out.col_effects.transpose();
  return out;
}

struct DoubleAveragedPca {
  PcaResult pca;
  BicenterDecomposition decomposition;
};

/// PCA with double averaging: decompose the bicentering residuals, which are
/// already centered, without scaling.
inline DoubleAveragedPca pca_double_averaged(const Matrix& a, const PcaMethod& method = {}) {
  DoubleAveragedPca out;
  out.decomposition = bicenter(a);
  out.pca = pca_core(out.decomposition.residuals, method);
  return out;
}

}  // namespace dimred
