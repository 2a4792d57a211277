#pragma once

// Dense spectral kernels shared by every analysis: symmetric EVD, exact SVD,
// QR orthonormalization, seeded Gaussian sketches, randomized SVD and SPD
// square roots. Double precision throughout; every routine is a pure
// function of its arguments (plus the explicit seed), so concurrent calls
// are safe.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dimred/error.hpp"
#include "dimred/types.hpp"

namespace dimred {

namespace detail {

inline void require_finite(const Matrix& a, const char* who) {
  if (!a.allFinite()) {
    throw NonFiniteError(std::string(who) + ": input contains NaN or Inf");
  }
}

inline void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatchError(std::string(who) + ": matrix must be square, got " +
                                 std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

inline void require_symmetric(const Matrix& a, const char* who) {
  require_square(a, who);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double gap = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (gap > 1e-10 * scale) {
    throw NonSymmetricError(std::string(who) + ": matrix is not symmetric (max asymmetry " +
                            std::to_string(gap) + ")");
  }
}

// Index of the coefficient of largest magnitude, lowest index on ties.
inline Index argmax_abs(const Eigen::Ref<const Vector>& v) {
  Index best = 0;
  double best_abs = std::abs(v[0]);
  for (Index i = 1; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs) {
      best = i;
      best_abs = a;
    }
  }
  return best;
}

// Deterministic sign convention: each vector is flipped so that its
// largest-magnitude coefficient is positive (ties: lowest index). For
// singular pairs the axis v decides and u follows so that u sigma v^T is
// preserved.
inline void orient_eigenvectors(Matrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    if (v(argmax_abs(v.col(j)), j) < 0.0) v.col(j) = -v.col(j);
  }
}

inline void orient_singular_pairs(Matrix& u, Matrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    if (v(argmax_abs(v.col(j)), j) < 0.0) {
      v.col(j) = -v.col(j);
      u.col(j) = -u.col(j);
    }
  }
}

// Standard-normal stream: mt19937_64 seeded directly, 53-bit uniforms,
// Box-Muller transform, both values of each pair consumed. The stream is
// fully determined by the seed; the transform is pinned here so that two
// builds differ at most in libm rounding.
class GaussianStream {
 public:
  explicit GaussianStream(RngSeed seed) : engine_(seed.value) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = ((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = (engine_() >> 11) * 0x1.0p-53;        // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

/// Eigendecomposition of a symmetric matrix. Returns eigenvalues sorted
/// descending (stable among equal values) and the matching orthonormal
/// eigenvectors, sign-fixed so the largest-magnitude coefficient of each
/// vector is positive.
inline std::pair<Vector, Matrix> sym_evd(const Matrix& c) {
  detail::require_finite(c, "sym_evd");
  detail::require_symmetric(c, "sym_evd");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(c);
  if (solver.info() != Eigen::Success) {
    throw Error("sym_evd: eigensolver did not converge");
  }

  const Vector& raw_values = solver.eigenvalues();  // ascending
  const Matrix& raw_vectors = solver.eigenvectors();
  const Index p = c.rows();

  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return raw_values[a] > raw_values[b]; });

  Vector values(p);
  Matrix vectors(p, p);
  for (Index j = 0; j < p; ++j) {
    values[j] = raw_values[order[static_cast<std::size_t>(j)]];
    vectors.col(j) = raw_vectors.col(order[static_cast<std::size_t>(j)]);
  }
  detail::orient_eigenvectors(vectors);
  return {std::move(values), std::move(vectors)};
}

/// Thin SVD with min(n, p) triplets, singular values descending. The sign of
/// each pair is fixed through the right singular vector.
inline SvdResult svd_exact(const Matrix& a) {
  detail::require_finite(a, "svd_exact");
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult result{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  detail::orient_singular_pairs(result.u, result.v);
  return result;
}

/// Householder QR, thin Q with the same span as y. Throws RankDeficient when
/// a diagonal entry of R falls to 1e-12 of the largest one (or everything is
/// zero), which for sketches means the draw collapsed.
inline Matrix qr_orthonormalize(const Matrix& y) {
  detail::require_finite(y, "qr_orthonormalize");
  if (y.cols() > y.rows()) {
    throw BadRankError("qr_orthonormalize: need k <= n, got " + std::to_string(y.cols()) +
                       " columns for " + std::to_string(y.rows()) + " rows");
  }
  Eigen::HouseholderQR<Matrix> qr(y);
  const Vector diag = qr.matrixQR().diagonal().head(y.cols()).cwiseAbs();
  const double tol = 1e-12 * diag.maxCoeff();
  for (Index i = 0; i < diag.size(); ++i) {
    if (diag[i] <= tol) {
      throw RankDeficientError("qr_orthonormalize: column set is numerically rank deficient (R[" +
                               std::to_string(i) + "," + std::to_string(i) + "] ~ 0)");
    }
  }
  return qr.householderQ() * Matrix::Identity(y.rows(), y.cols());
}

/// p x k' matrix of i.i.d. standard normal draws, filled column-major from
/// the seeded stream. Same (p, k', seed) always gives the same matrix.
inline Matrix gaussian_sketch(Index p, Index k_prime, RngSeed seed) {
  if (p < 1 || k_prime < 1) {
    throw BadRankError("gaussian_sketch: dimensions must be >= 1");
  }
  detail::GaussianStream stream(seed);
  Matrix omega(p, k_prime);
  for (Index j = 0; j < k_prime; ++j) {
    for (Index i = 0; i < p; ++i) {
      omega(i, j) = stream.next();
    }
  }
  return omega;
}

/// Randomized SVD by Gaussian projection: sketch Y = A Omega with
/// k + oversampling columns, orthonormalize to Q, decompose B = Q^T A and
/// recombine U = Q U_B. Returns the first k triplets. The sketch width is
/// clamped to min(n, p) so small matrices keep working. Inputs of numerical
/// rank below the sketch width are fine: the deficient trailing directions
/// of the sketch are dropped (pivoted QR). RankDeficient fires only when
/// fewer than k sound directions remain, i.e. the sketch collapsed.
///
/// Extension point: power iterations (re-sketching with (A A^T)^q A) would
/// sharpen the basis on slowly decaying spectra; the plain single-pass
/// sketch is the contract here and none are performed.
inline SvdResult svd_grp(const Matrix& a, Index k, Index oversampling = 5, RngSeed seed = {}) {
  detail::require_finite(a, "svd_grp");
  const Index min_np = std::min(a.rows(), a.cols());
  if (k < 1 || k > min_np) {
    throw BadRankError("svd_grp: rank must lie in [1, min(n,p)], got " + std::to_string(k));
  }
  if (oversampling < 0) {
    throw BadRankError("svd_grp: oversampling must be >= 0");
  }
  const Index width = std::min(k + oversampling, min_np);
  const Matrix omega = gaussian_sketch(a.cols(), width, seed);
  const Matrix y = a * omega;
  Eigen::ColPivHouseholderQR<Matrix> qr(y);
  qr.setThreshold(1e-12);
  const Index sketch_rank = std::min(qr.rank(), width);
  if (sketch_rank < k) {
    throw RankDeficientError("svd_grp: sketch spans " + std::to_string(sketch_rank) +
                             " directions for requested rank " + std::to_string(k) +
                             "; retry with another seed or lower the rank");
  }
  const Matrix q = qr.householderQ() * Matrix::Identity(y.rows(), sketch_rank);
  SvdResult inner = svd_exact(q.transpose() * a);
  return SvdResult{q * inner.u.leftCols(k), inner.sigma.head(k), inner.v.leftCols(k)};
}

/// An SPD inner product together with its unique SPD square root and the
/// inverse square root. Diagonal metrics (the common case: weights) keep a
/// vector representation so applying them costs O(n) scalings, not a GEMM.
class SpdFactor {
 public:
  static SpdFactor identity(Index dim) {
    SpdFactor f;
    f.diagonal_ = true;
    f.sqrt_diag_ = Vector::Ones(dim);
    f.inv_sqrt_diag_ = Vector::Ones(dim);
    f.matrix_ = Matrix::Identity(dim, dim);
    f.sqrt_ = Matrix::Identity(dim, dim);
    f.inv_sqrt_ = Matrix::Identity(dim, dim);
    return f;
  }

  /// Diagonal metric from strictly positive weights.
  static SpdFactor from_weights(const Vector& w) {
    if (w.size() < 1) throw DimensionMismatchError("SpdFactor: empty weight vector");
    if (!w.allFinite()) throw NonFiniteError("SpdFactor: weights contain NaN or Inf");
    const double tol = 1e-12 * w.maxCoeff();
    for (Index i = 0; i < w.size(); ++i) {
      if (w[i] <= tol) {
        throw NotSpdError("SpdFactor: weight " + std::to_string(i) +
                          " is not strictly positive");
      }
    }
    SpdFactor f;
    f.diagonal_ = true;
    f.sqrt_diag_ = w.cwiseSqrt();
    f.inv_sqrt_diag_ = f.sqrt_diag_.cwiseInverse();
    f.matrix_ = w.asDiagonal();
    f.sqrt_ = f.sqrt_diag_.asDiagonal();
    f.inv_sqrt_ = f.inv_sqrt_diag_.asDiagonal();
    return f;
  }

  Index dim() const { return matrix_.rows(); }
  bool is_diagonal() const { return diagonal_; }
  const Matrix& matrix() const { return matrix_; }
  const Matrix& sqrt() const { return sqrt_; }
  const Matrix& inv_sqrt() const { return inv_sqrt_; }

  // Q A / A Q / Q^-1 A / A Q^-1 with the diagonal fast path.
  Matrix apply_sqrt_left(const Matrix& a) const {
    return diagonal_ ? Matrix(sqrt_diag_.asDiagonal() * a) : Matrix(sqrt_ * a);
  }
  Matrix apply_sqrt_right(const Matrix& a) const {
    return diagonal_ ? Matrix(a * sqrt_diag_.asDiagonal()) : Matrix(a * sqrt_);
  }
  Matrix apply_inv_sqrt_left(const Matrix& a) const {
    return diagonal_ ? Matrix(inv_sqrt_diag_.asDiagonal() * a) : Matrix(inv_sqrt_ * a);
  }
  Matrix apply_inv_sqrt_right(const Matrix& a) const {
    return diagonal_ ? Matrix(a * inv_sqrt_diag_.asDiagonal()) : Matrix(a * inv_sqrt_);
  }

  friend SpdFactor spd_factor(const Matrix&);

 private:
  SpdFactor() = default;
  bool diagonal_ = false;
  Vector sqrt_diag_;      // only when diagonal_
  Vector inv_sqrt_diag_;  // only when diagonal_
  Matrix matrix_;
  Matrix sqrt_;
  Matrix inv_sqrt_;
};

/// Factor an SPD matrix into its square root and inverse square root.
/// Exactly diagonal input takes the entrywise path; otherwise a symmetric
/// EVD is used. Eigenvalues at or below 1e-12 of the largest are rejected,
/// never regularized: a near-singular metric changes the analysis and the
/// caller has to decide.
inline SpdFactor spd_factor(const Matrix& p) {
  detail::require_finite(p, "spd_factor");
  detail::require_symmetric(p, "spd_factor");

  if (p.isDiagonal(0.0)) {
    return SpdFactor::from_weights(p.diagonal());
  }

  auto [values, vectors] = sym_evd(p);
  const double largest = values[0];
  if (!(largest > 0.0)) {
    throw NotSpdError("spd_factor: matrix has no positive eigenvalue");
  }
  const double tol = 1e-12 * largest;
  if (values[values.size() - 1] <= tol) {
    throw NotSpdError("spd_factor: smallest eigenvalue " +
                      std::to_string(values[values.size() - 1]) +
                      " is at or below the positivity tolerance");
  }
  SpdFactor f;
  f.diagonal_ = false;
  f.matrix_ = p;
  const Vector roots = values.cwiseSqrt();
  Matrix s = vectors * roots.asDiagonal() * vectors.transpose();
  Matrix si = vectors * roots.cwiseInverse().asDiagonal() * vectors.transpose();
  // symmetrize away the last rounding
  f.sqrt_ = 0.5 * (s + s.transpose());
  f.inv_sqrt_ = 0.5 * (si + si.transpose());
  return f;
}

}  // namespace dimred
