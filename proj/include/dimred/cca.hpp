#pragma once

// Canonical Correlation Analysis of two column blocks observed on the same
// items, reduced to the decomposition of R = (A^T A)^{-1/2} A^T B (B^T B)^{-1/2}.
// The singular values of R are the canonical correlations; variates are
// scaled to unit norm so that <y_a, y_b> per axis is the correlation itself.

#include <string>
#include <utility>
#include <vector>

#include "dimred/backend.hpp"
#include "dimred/types.hpp"

namespace dimred {

struct CcaResult {
  Matrix variates_a;   // Y_a, n x k, unit columns, mutually orthonormal
  Matrix variates_b;   // Y_b, n x k
  Matrix loadings_a;   // U_a, p x k, with Y_a = A U_a
  Matrix loadings_b;   // U_b, q x k
  Vector correlations; // in [0, 1], descending
  std::vector<std::string> warnings;
};

namespace detail {

inline SpdFactor gram_factor(const Matrix& block, const char* name) {
  try {
    return spd_factor(Matrix(block.transpose() * block));
  } catch (const NotSpdError&) {
    throw SingularBlockError(name, std::string("cca: block ") + name +
                                       " has a numerically singular Gram matrix "
                                       "(collinear columns); drop or recombine columns");
  }
}

inline void warn_if_uncentered(const Matrix& block, const char* name,
                               std::vector<std::string>& warnings) {
  const double scale = std::max(1.0, block.cwiseAbs().maxCoeff());
  if (block.colwise().mean().cwiseAbs().maxCoeff() > 1e-8 * scale) {
    warnings.push_back(std::string("columns of ") + name +
                       " are not centered; correlations reflect raw angles");
  }
}

}  // namespace detail

/// Canonical correlations and variates of (a, b). The wider block is put on
/// the left internally so the decomposition runs on the smaller side; results
/// are swapped back. Backends: Grp uses the randomized decomposition of R
/// (prescribed rank required), anything else the exact one.
inline CcaResult cca(const Matrix& a, const Matrix& b, const PcaMethod& method = {}) {
  detail::require_finite(a, "cca");
  detail::require_finite(b, "cca");
  if (a.rows() != b.rows()) {
    throw DimensionMismatchError("cca: blocks have " + std::to_string(a.rows()) + " and " +
                                 std::to_string(b.rows()) + " rows");
  }

  if (b.cols() > a.cols()) {
    CcaResult swapped = cca(b, a, method);
    std::swap(swapped.variates_a, swapped.variates_b);
    std::swap(swapped.loadings_a, swapped.loadings_b);
    return swapped;
  }

  CcaResult out;
  detail::warn_if_uncentered(a, "a", out.warnings);
  detail::warn_if_uncentered(b, "b", out.warnings);

  const SpdFactor gram_a = detail::gram_factor(a, "a");
  const SpdFactor gram_b = detail::gram_factor(b, "b");
  const Matrix r = gram_a.apply_inv_sqrt_left(gram_b.apply_inv_sqrt_right(a.transpose() * b));

  SvdResult svd;
  if (method.backend == SvdBackend::Grp) {
    if (!method.rank) throw BadRankError("cca: the grp backend needs a prescribed rank");
    svd = svd_grp(r, *method.rank, method.oversampling, method.seed);
  } else {
    svd = svd_exact(r);
    if (method.rank) {
      if (*method.rank < 1 || *method.rank > svd.sigma.size()) {
        throw BadRankError("cca: rank must lie in [1, min(p,q)]");
      }
      svd.u = svd.u.leftCols(*method.rank).eval();
      svd.sigma = svd.sigma.head(*method.rank).eval();
      svd.v = svd.v.leftCols(*method.rank).eval();
    }
  }

  out.correlations = svd.sigma;
  out.loadings_a = gram_a.apply_inv_sqrt_left(svd.u);
  out.loadings_b = gram_b.apply_inv_sqrt_left(svd.v);
  out.variates_a = a * out.loadings_a;
  out.variates_b = b * out.loadings_b;
  return out;
}

struct CanonicalProjectors {
  Matrix a;  // n x n projector onto span(A)
  Matrix b;  // n x n projector onto span(B)
};

/// Orthogonal projectors onto the column spans of the two blocks. The
/// nonzero eigenvalues of a * b are the squared canonical correlations.
inline CanonicalProjectors canonical_projectors(const Matrix& a, const Matrix& b) {
  detail::require_finite(a, "canonical_projectors");
  detail::require_finite(b, "canonical_projectors");
  if (a.rows() != b.rows()) {
    throw DimensionMismatchError("canonical_projectors: blocks have different row counts");
  }
  const SpdFactor gram_a = detail::gram_factor(a, "a");
  const SpdFactor gram_b = detail::gram_factor(b, "b");
  const Matrix half_a = gram_a.apply_inv_sqrt_right(a);
  const Matrix half_b = gram_b.apply_inv_sqrt_right(b);
  return CanonicalProjectors{half_a * half_a.transpose(), half_b * half_b.transpose()};
}

}  // namespace dimred
