#pragma once

// PCA with instrumental variables: project the data onto the tensor product
// of two prescribed subspaces, decompose the projection, and report the
// quality of both stages separately. Non-orthonormal bases are orthonormalized
// by QR rather than through the Gram inverse, which is better conditioned.

#include <cmath>
#include <string>
#include <utility>

#include "dimred/backend.hpp"
#include "dimred/pca.hpp"
#include "dimred/pcamet.hpp"
#include "dimred/types.hpp"

namespace dimred {

/// A subspace of R^ambient given by a spanning basis. When the basis is
/// declared orthonormal this is checked at construction; otherwise the
/// projector orthonormalizes it on the fly.
class Subspace {
 public:
  explicit Subspace(Matrix basis, bool orthonormal = false)
      : basis_(std::move(basis)), orthonormal_(orthonormal) {
    detail::require_finite(basis_, "Subspace");
    if (basis_.cols() < 1 || basis_.cols() > basis_.rows()) {
      throw DimensionMismatchError("Subspace: need 1 <= dim <= ambient, got " +
                                   std::to_string(basis_.cols()) + " basis vectors in R^" +
                                   std::to_string(basis_.rows()));
    }
    if (orthonormal_) {
      const Matrix gram = basis_.transpose() * basis_;
      const double gap = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
      if (gap > 1e-10) {
        throw NonSymmetricError("Subspace: basis declared orthonormal is not (gap " +
                                std::to_string(gap) + ")");
      }
    }
  }

  /// The whole ambient space (identity basis).
  static Subspace full(Index ambient) { return Subspace(Matrix::Identity(ambient, ambient), true); }

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  bool orthonormal() const { return orthonormal_; }

  /// An orthonormal basis of the same span.
  Matrix orthonormal_basis() const {
    return orthonormal_ ? basis_ : qr_orthonormalize(basis_);
  }

 private:
  Matrix basis_;
  bool orthonormal_;
};

/// Orthogonal projector onto the subspace: U U^T for an orthonormal basis U.
/// Idempotent, symmetric, trace = dim. RankDeficient if the basis is not of
/// full column rank.
inline Matrix projector(const Subspace& s) {
  const Matrix u = s.orthonormal_basis();
  return u * u.transpose();
}

struct PcaivResult {
  PcaResult pca;                  // decomposition of the projected matrix
  double projection_quality = 0;  // theta = ||RAS|| / ||A||, cosine of the angle
  Matrix projected;               // RAS
  bool degenerate = false;        // theta was 0/0 (A = 0)

  /// ||Y_r|| / ||RAS|| from the eigenvalues: the norm fraction kept by the
  /// first r components, so that ||Y_r|| = fraction * theta * ||A||.
  double component_norm_fraction(Index r) const {
    const double total = pca.eigenvalues.sum();
    if (!(total > 0.0)) return 0.0;
    return std::sqrt(pca.eigenvalues.head(r).sum() / total);
  }
};

/// PCA with instrumental variables: decompose R A S where R, S project onto
/// e (components side, in R^n) and f (axes side, in R^p).
inline PcaivResult pcaiv(const Matrix& a, const Subspace& e, const Subspace& f,
                         const PcaMethod& method = {}) {
  detail::require_finite(a, "pcaiv");
  if (e.ambient_dim() != a.rows() || f.ambient_dim() != a.cols()) {
    throw DimensionMismatchError("pcaiv: subspace ambients " + std::to_string(e.ambient_dim()) +
                                 "/" + std::to_string(f.ambient_dim()) + " do not match a " +
                                 std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                 " matrix");
  }
  PcaivResult out;
  out.projected = projector(e) * a * projector(f);
  out.pca = pca_core(out.projected, method);
  const double norm_a = a.norm();
  out.degenerate = !(norm_a > 0.0);
  out.projection_quality = out.degenerate ? 0.0 : out.projected.norm() / norm_a;
  return out;
}

enum class ConstraintSide { Rows, Columns };

/// Constrain one side only; the omitted side's projector is the identity.
/// side = Rows constrains the components (subspace of R^n), side = Columns
/// the axes (subspace of R^p).
inline PcaivResult pcaiv_constrained_one_side(const Matrix& a, const Subspace& s,
                                              ConstraintSide side,
                                              const PcaMethod& method = {}) {
  if (side == ConstraintSide::Rows) {
    return pcaiv(a, s, Subspace::full(a.cols()), method);
  }
  return pcaiv(a, Subspace::full(a.rows()), s, method);
}

/// Instrumental variables combined with metrics n (rows) and p (columns).
/// Bases are orthonormalized in their metric internally; the metric-aware
/// projectors are R = U U^T N and S = V V^T P, and the projected matrix is
/// decomposed with pca_met under the same metrics. With identity metrics
/// this is exactly pcaiv.
inline PcaivResult pcaiv_with_metrics(const Matrix& a, const Subspace& e, const Subspace& f,
                                      const SpdFactor& n, const SpdFactor& p,
                                      const PcaMethod& method = {}) {
  detail::require_finite(a, "pcaiv_with_metrics");
  detail::require_metric_dims(a, n, p, "pcaiv_with_metrics");
  if (e.ambient_dim() != a.rows() || f.ambient_dim() != a.cols()) {
    throw DimensionMismatchError("pcaiv_with_metrics: subspace ambients do not match the matrix");
  }
  // N-orthonormal basis of span(e): transport, QR, transport back.
  const Matrix u = n.apply_inv_sqrt_left(qr_orthonormalize(n.apply_sqrt_left(e.basis())));
  const Matrix v = p.apply_inv_sqrt_left(qr_orthonormalize(p.apply_sqrt_left(f.basis())));

  PcaivResult out;
  const Matrix nap = n.matrix() * a * p.matrix();
  out.projected = (u * u.transpose()) * nap * (v * v.transpose());
  out.pca = pca_met(out.projected, n, p, method);
  const double norm_a = transport_norm(a, n, p);
  out.degenerate = !(norm_a > 0.0);
  out.projection_quality = out.degenerate ? 0.0 : transport_norm(out.projected, n, p) / norm_a;
  return out;
}

}  // namespace dimred
