#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

namespace dimred {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Seed of the Gaussian sketch generator. A fixed seed gives a bit-identical
/// sketch across runs of one build (see gaussian_sketch for the exact stream).
struct RngSeed {
  std::uint64_t value = 0;
};

/// $(U, \Sigma, V)$ with $A \approx U \Sigma V^T$. Columns of u and v are
/// orthonormal, sigma is sorted descending and nonnegative.
struct SvdResult {
  Matrix u;      // n x k
  Vector sigma;  // k
  Matrix v;      // p x k
};

enum class SvdBackend { Evd, Svd, Grp };

/// How to run the spectral core: which backend, how many components to keep
/// (no value = keep everything), and the sketch parameters for the
/// randomized backend. The randomized backend needs a prescribed rank.
struct PcaMethod {
  SvdBackend backend = SvdBackend::Svd;
  std::optional<Index> rank{};  // no value = all components
  Index oversampling = 5;
  RngSeed seed{};

  static PcaMethod evd(std::optional<Index> rank = {}) {
    return {SvdBackend::Evd, rank, 5, {}};
  }
  static PcaMethod svd(std::optional<Index> rank = {}) {
    return {SvdBackend::Svd, rank, 5, {}};
  }
  static PcaMethod grp(Index rank, RngSeed seed = {}, Index oversampling = 5) {
    return {SvdBackend::Grp, rank, oversampling, seed};
  }
};

/// Common output of every analysis: coordinates in the new basis
/// (components), the spectrum, and the basis itself (axes).
struct PcaResult {
  Matrix components;   // Y, n x k
  Vector eigenvalues;  // lambda = sigma^2, descending
  Matrix axes;         // V, p x k
};

}  // namespace dimred
