#pragma once

// Classical (Torgerson) multidimensional scaling: recover a Gram matrix from
// squared pairwise distances by double centering, eigendecompose it, and
// read coordinates off the positive part of the spectrum. Negative
// eigenvalues flag a non-Euclidean input; the corresponding axes are clipped
// and reported, never embedded.

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dimred/backend.hpp"
#include "dimred/types.hpp"

namespace dimred {

/// A symmetric, nonnegative, zero-diagonal dissimilarity matrix. The triangle
/// inequality is deliberately not checked: the procedure is well defined for
/// any symmetric dissimilarity, and the spectrum reports how non-Euclidean
/// the input was.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(Matrix d) : d_(std::move(d)) {
    detail::require_finite(d_, "DistanceMatrix");
    detail::require_square(d_, "DistanceMatrix");
    const double scale = std::max(1.0, d_.cwiseAbs().maxCoeff());
    const double gap = (d_ - d_.transpose()).cwiseAbs().maxCoeff();
    if (gap > 1e-10 * scale) {
      throw AsymmetricInputError("DistanceMatrix: input is not symmetric (max gap " +
                                 std::to_string(gap) + ")");
    }
    if (d_.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw NonzeroDiagonalError("DistanceMatrix: diagonal is not zero");
    }
    if ((d_.array() < 0.0).any()) {
      throw NegativeEntryError("DistanceMatrix: negative entry");
    }
    d_ = 0.5 * (d_ + d_.transpose());  // absorb the admitted asymmetry
    d_.diagonal().setZero();
  }

  const Matrix& values() const { return d_; }
  Index size() const { return d_.rows(); }

 private:
  Matrix d_;
};

/// Gram matrix from squared distances by double centering:
/// g_ij = -1/2 (d_ij^2 - mean_i - mean_j + mean_all). Row sums are zero and
/// d_ij^2 = g_ii + g_jj - 2 g_ij reconstructs the input.
inline Matrix gram_from_distances(const DistanceMatrix& d) {
  const Matrix d2 = d.values().array().square();
  const Index n = d.size();
  const Vector row_mean = d2.rowwise().mean();
  const double all_mean = d2.mean();
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      g(i, j) = -0.5 * (d2(i, j) - row_mean[i] - row_mean[j] + all_mean);
    }
  }
  return g;
}

struct MdsResult {
  Matrix coords;  // n x r' with r' <= r when the positive spectrum is short
  Vector lambda;  // every computed eigenvalue of G, descending, negatives kept
  Index n_negative = 0;
  double negative_mass = 0.0;  // sum |negative lambda| / sum |lambda|
  std::vector<std::string> warnings;
};

/// Classical MDS at dimension r. The Gram matrix is symmetric, so the exact
/// backends use the symmetric EVD directly; the randomized backend computes
/// eigenvalue magnitudes and recovers signs through Rayleigh quotients
/// u^T G u. Eigenvalues below -1e-8 max(lambda) are clipped and counted; the
/// band between that and zero is treated as numerical zero.
inline MdsResult mds(const DistanceMatrix& d, Index r, const PcaMethod& method = {}) {
  const Index n = d.size();
  if (r < 1 || r >= n) {
    throw BadRankError("mds: dimension must lie in [1, n-1], got " + std::to_string(r));
  }
  const Matrix g = gram_from_distances(d);

  Vector lambda;
  Matrix vectors;
  if (method.backend == SvdBackend::Grp) {
    const Index k = r;  // oversampling happens inside the sketch
    SvdResult svd = svd_grp(g, k, method.oversampling, method.seed);
    lambda = Vector(k);
    for (Index j = 0; j < k; ++j) {
      lambda[j] = svd.u.col(j).dot(g * svd.u.col(j));  // Rayleigh sign recovery
    }
    std::vector<Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index x, Index y) { return lambda[x] > lambda[y]; });
    Vector sorted(k);
    vectors = Matrix(n, k);
    for (Index j = 0; j < k; ++j) {
      sorted[j] = lambda[order[static_cast<std::size_t>(j)]];
      vectors.col(j) = svd.u.col(order[static_cast<std::size_t>(j)]);
    }
    lambda = std::move(sorted);
  } else {
    auto evd = sym_evd(g);
    lambda = std::move(evd.first);
    vectors = std::move(evd.second);
  }

  MdsResult out;
  out.lambda = lambda;
  const double top = std::max(lambda[0], 0.0);
  const double neg_threshold = -1e-8 * top;
  double neg_mass = 0.0;
  Index kept = 0;
  for (Index j = 0; j < lambda.size(); ++j) {
    if (lambda[j] < neg_threshold) {
      ++out.n_negative;
      neg_mass += -lambda[j];
    } else {
      ++kept;
    }
  }
  const double total_mass = lambda.cwiseAbs().sum();
  out.negative_mass = total_mass > 0.0 ? neg_mass / total_mass : 0.0;

  const Index width = std::min(r, kept);
  if (width < r) {
    out.warnings.push_back("only " + std::to_string(width) +
                           " nonnegative eigenvalues available for the requested dimension " +
                           std::to_string(r));
  }
  out.coords = Matrix(n, width);
  for (Index j = 0; j < width; ++j) {
    out.coords.col(j) = vectors.col(j) * std::sqrt(std::max(lambda[j], 0.0));
  }
  return out;
}

/// Relative embedding defect: ||D - distances(X)|| / ||D||. Zero for exact
/// embeddings, one for a collapsed embedding of a nonzero input.
inline double embedding_stress(const DistanceMatrix& d, const Matrix& x) {
  if (x.rows() != d.size()) {
    throw DimensionMismatchError("embedding_stress: " + std::to_string(x.rows()) +
                                 " embedded points for " + std::to_string(d.size()) +
                                 " distances");
  }
  const Index n = d.size();
  Matrix dx = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      dx(i, j) = dx(j, i) = (x.row(i) - x.row(j)).norm();
    }
  }
  const double denom = d.values().norm();
  const double defect = (d.values() - dx).norm();
  if (denom > 0.0) return defect / denom;
  return defect > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace dimred
