#include "dimred/backend.hpp"

#include <cmath>
#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace dimred;
using testsupport::max_abs_diff;
using testsupport::random_matrix;
using testsupport::random_orthonormal;
using testsupport::rank_k_matrix;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

}  // namespace

TEST(SymEvd, IdentityHasUnitSpectrum) {
  auto [lambda, v] = sym_evd(Matrix::Identity(2, 2));
  EXPECT_NEAR(lambda[0], 1.0, 1e-12);
  EXPECT_NEAR(lambda[1], 1.0, 1e-12);
  // residual test is what accepts the eigenbasis
  EXPECT_LT(max_abs_diff(Matrix::Identity(2, 2) * v, v * lambda.asDiagonal()), 1e-10);
}

TEST(SymEvd, AnalyticTwoByTwo) {
  const Matrix c = from_rows({{2, 2}, {2, 2}});
  auto [lambda, v] = sym_evd(c);
  EXPECT_NEAR(lambda[0], 4.0, 1e-12);
  EXPECT_NEAR(lambda[1], 0.0, 1e-12);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(v(0, 0)), inv_sqrt2, 1e-12);
  EXPECT_NEAR(std::abs(v(1, 0)), inv_sqrt2, 1e-12);
  EXPECT_GT(v(0, 0) * v(1, 0), 0.0);  // same sign on both coefficients
}

TEST(SymEvd, DiagonalCase) {
  const Matrix c = Vector{{5.0, 3.0, 1.0}}.asDiagonal();
  auto [lambda, v] = sym_evd(c);
  EXPECT_NEAR(lambda[0], 5.0, 1e-12);
  EXPECT_NEAR(lambda[1], 3.0, 1e-12);
  EXPECT_NEAR(lambda[2], 1.0, 1e-12);
  EXPECT_LT(testsupport::max_abs_diff_up_to_column_signs(Matrix::Identity(3, 3), v), 1e-12);
}

TEST(SymEvd, ResidualAndOrthonormalityOnRandomInput) {
  const Matrix a = random_matrix(7, 7, 11);
  const Matrix c = a + a.transpose();
  auto [lambda, v] = sym_evd(c);
  const double scale = std::max(1.0, c.norm());
  EXPECT_LT((c * v - v * lambda.asDiagonal()).norm() / scale, 1e-8);
  EXPECT_LT(max_abs_diff(v.transpose() * v, Matrix::Identity(7, 7)), 1e-10);
  for (Index j = 1; j < lambda.size(); ++j) EXPECT_GE(lambda[j - 1], lambda[j]);
}

TEST(SymEvd, SignConventionMakesLargestCoefficientPositive) {
  const Matrix a = random_matrix(6, 6, 23);
  auto [lambda, v] = sym_evd(Matrix(a + a.transpose()));
  for (Index j = 0; j < v.cols(); ++j) {
    Index arg = 0;
    v.col(j).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(v(arg, j), 0.0);
  }
}

TEST(SymEvd, RejectsNonSymmetric) {
  EXPECT_THROW(sym_evd(from_rows({{1, 2}, {0, 1}})), NonSymmetricError);
}

TEST(SymEvd, RejectsNonFinite) {
  Matrix c = Matrix::Identity(2, 2);
  c(0, 1) = c(1, 0) = std::nan("");
  EXPECT_THROW(sym_evd(c), NonFiniteError);
}

TEST(SvdExact, RankOneDiagonal) {
  const SvdResult s = svd_exact(from_rows({{3, 0}, {0, 0}}));
  EXPECT_NEAR(s.sigma[0], 3.0, 1e-12);
  EXPECT_NEAR(s.sigma[1], 0.0, 1e-12);
}

TEST(SvdExact, RankOneOuterProduct) {
  // A = x y^T has sigma_1 = |x||y|; cross-checked against the Frobenius norm,
  // which for a rank-one matrix is the whole spectrum.
  const Vector x{{1.0, 2.0}};
  const Vector y{{2.0, 1.0}};
  const Matrix a = x * y.transpose();
  ASSERT_NEAR(a.norm(), x.norm() * y.norm(), 1e-12);  // brute-force oracle
  const SvdResult s = svd_exact(a);
  EXPECT_NEAR(s.sigma[0], 5.0, 1e-12);
  EXPECT_NEAR(s.sigma[1], 0.0, 1e-12);
}

TEST(SvdExact, OrthonormalMatrixHasUnitSpectrum) {
  const Matrix q = random_orthonormal(5, 5, 3);
  const SvdResult s = svd_exact(q);
  for (Index i = 0; i < 5; ++i) EXPECT_NEAR(s.sigma[i], 1.0, 1e-12);
}

TEST(SvdExact, ReconstructionAndInvariants) {
  const Matrix a = random_matrix(8, 5, 17);
  const SvdResult s = svd_exact(a);
  EXPECT_LT((a - s.u * s.sigma.asDiagonal() * s.v.transpose()).norm() / a.norm(), 1e-8);
  EXPECT_LT(max_abs_diff(s.u.transpose() * s.u, Matrix::Identity(5, 5)), 1e-10);
  EXPECT_LT(max_abs_diff(s.v.transpose() * s.v, Matrix::Identity(5, 5)), 1e-10);
  for (Index i = 1; i < s.sigma.size(); ++i) EXPECT_GE(s.sigma[i - 1], s.sigma[i]);
  EXPECT_GE(s.sigma[s.sigma.size() - 1], 0.0);
}

TEST(SvdExact, RejectsNonFinite) {
  Matrix a = Matrix::Ones(2, 2);
  a(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(svd_exact(a), NonFiniteError);
}

TEST(QrOrthonormalize, SingleColumn) {
  const Matrix q = qr_orthonormalize(from_rows({{2}, {0}}));
  EXPECT_NEAR(std::abs(q(0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(q(1, 0), 0.0, 1e-14);
}

TEST(QrOrthonormalize, OrthonormalInputKeptUpToSigns) {
  const Matrix y = random_orthonormal(6, 3, 5);
  const Matrix q = qr_orthonormalize(y);
  EXPECT_LT(testsupport::max_abs_diff_up_to_column_signs(y, q), 1e-12);
}

TEST(QrOrthonormalize, HandGramSchmidtCase) {
  const Matrix y = from_rows({{1, 1}, {0, 1}, {0, 0}});
  const Matrix q = qr_orthonormalize(y);
  EXPECT_LT(max_abs_diff(q.transpose() * q, Matrix::Identity(2, 2)), 1e-10);
  // span preserved: projecting y onto q leaves it unchanged
  EXPECT_LT(max_abs_diff(q * (q.transpose() * y), y), 1e-12);
}

TEST(QrOrthonormalize, DetectsRankDeficiency) {
  Matrix y(3, 2);
  y.col(0) = Vector{{1.0, 2.0, 3.0}};
  y.col(1) = 2.0 * y.col(0);
  EXPECT_THROW(qr_orthonormalize(y), RankDeficientError);
  EXPECT_THROW(qr_orthonormalize(Matrix::Zero(4, 2)), RankDeficientError);
}

TEST(QrOrthonormalize, RejectsWideInput) {
  EXPECT_THROW(qr_orthonormalize(Matrix::Ones(2, 3)), BadRankError);
}

TEST(GaussianSketch, DeterministicPerSeed) {
  const Matrix a = gaussian_sketch(20, 7, RngSeed{42});
  const Matrix b = gaussian_sketch(20, 7, RngSeed{42});
  EXPECT_EQ(max_abs_diff(a, b), 0.0);  // bit identical
  const Matrix c = gaussian_sketch(20, 7, RngSeed{43});
  EXPECT_GT(max_abs_diff(a, c), 0.0);
}

TEST(GaussianSketch, StandardNormalMoments) {
  // Monte-Carlo check of the N(0,1) moments on a pooled sample.
  const Index n = 10000;
  const Matrix draws = gaussian_sketch(n, 1, RngSeed{7});
  const double mean = draws.mean();
  const double var = (draws.array() - mean).square().sum() / static_cast<double>(n - 1);
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(GaussianSketch, RejectsEmptyShapes) {
  EXPECT_THROW(gaussian_sketch(0, 3, RngSeed{1}), BadRankError);
  EXPECT_THROW(gaussian_sketch(3, 0, RngSeed{1}), BadRankError);
}

TEST(SvdGrp, RecoversExactLowRank) {
  const Vector sv{{8.0, 4.5, 2.0}};
  const Matrix a = rank_k_matrix(200, 50, sv, 31);
  const SvdResult exact = svd_exact(a);
  const SvdResult sketched = svd_grp(a, 3, 5, RngSeed{9});
  for (Index i = 0; i < 3; ++i) {
    EXPECT_NEAR(sketched.sigma[i], exact.sigma[i], 1e-8 * exact.sigma[0]);
  }
  const Matrix approx = sketched.u * sketched.sigma.asDiagonal() * sketched.v.transpose();
  EXPECT_LE((a - approx).norm() / a.norm(), 1e-8);
}

TEST(SvdGrp, ZeroMatrixReportsCollapsedSketch) {
  EXPECT_THROW(svd_grp(Matrix::Zero(10, 4), 1, 5, RngSeed{1}), RankDeficientError);
}

TEST(SvdGrp, DeterministicPerSeed) {
  const Matrix a = random_matrix(30, 12, 3);
  const SvdResult s1 = svd_grp(a, 4, 5, RngSeed{77});
  const SvdResult s2 = svd_grp(a, 4, 5, RngSeed{77});
  EXPECT_EQ(max_abs_diff(s1.u, s2.u), 0.0);
  EXPECT_EQ((s1.sigma - s2.sigma).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(max_abs_diff(s1.v, s2.v), 0.0);
}

TEST(SvdGrp, InvalidRank) {
  const Matrix a = random_matrix(10, 6, 4);
  EXPECT_THROW(svd_grp(a, 0, 5, RngSeed{1}), BadRankError);
  EXPECT_THROW(svd_grp(a, 7, 5, RngSeed{1}), BadRankError);
}

TEST(SvdGrp, SketchWidthClampedOnSmallMatrices) {
  // k + s exceeds min(n, p); still works on the clamped width.
  const Matrix a = random_matrix(6, 4, 8);
  const SvdResult s = svd_grp(a, 4, 5, RngSeed{2});
  const SvdResult exact = svd_exact(a);
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(s.sigma[i], exact.sigma[i], 1e-8);
}

TEST(SvdGrp, NoisyLowRankSigmaErrorBound) {
  // signal of rank 3 plus 1e-6 noise: top singular values within 1e-4
  // relative, over 20 seeds.
  const Vector sv{{5.0, 3.0, 1.5}};
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Matrix signal = rank_k_matrix(80, 40, sv, 100 + seed);
    const Matrix a = signal + 1e-6 * random_matrix(80, 40, 200 + seed);
    const Vector oracle = testsupport::jacobi_singular_values(a);
    const SvdResult sketched = svd_grp(a, 3, 5, RngSeed{seed});
    for (Index i = 0; i < 3; ++i) {
      EXPECT_LE(std::abs(sketched.sigma[i] - oracle[i]) / oracle[i], 1e-4)
          << "seed " << seed << " sigma " << i;
    }
  }
}

TEST(SpdFactor, DiagonalFastPath) {
  const Matrix p = Vector{{4.0, 9.0}}.asDiagonal();
  const SpdFactor f = spd_factor(p);
  EXPECT_TRUE(f.is_diagonal());
  EXPECT_LT(max_abs_diff(f.sqrt(), Vector{{2.0, 3.0}}.asDiagonal()), 1e-15);
  EXPECT_LT(max_abs_diff(f.inv_sqrt(), Vector{{0.5, 1.0 / 3.0}}.asDiagonal()), 1e-15);
}

TEST(SpdFactor, Identity) {
  const SpdFactor f = spd_factor(Matrix::Identity(3, 3));
  EXPECT_EQ(max_abs_diff(f.sqrt(), Matrix::Identity(3, 3)), 0.0);
  EXPECT_EQ(max_abs_diff(f.inv_sqrt(), Matrix::Identity(3, 3)), 0.0);
}

TEST(SpdFactor, DenseRootReconstructs) {
  const Matrix p = from_rows({{2, 1}, {1, 2}});
  const SpdFactor f = spd_factor(p);
  EXPECT_LT(max_abs_diff(f.sqrt() * f.sqrt(), p), 1e-12);
  EXPECT_LT(max_abs_diff(f.inv_sqrt() * f.sqrt(), Matrix::Identity(2, 2)), 1e-10);
}

TEST(SpdFactor, InvariantsOnRandomSpdMatrix) {
  const Matrix a = random_matrix(5, 5, 13);
  const Matrix p = a * a.transpose() + 0.5 * Matrix::Identity(5, 5);
  const SpdFactor f = spd_factor(p);
  EXPECT_LT(max_abs_diff(f.sqrt() * f.sqrt(), p) / p.norm(), 1e-10);
  EXPECT_LT(max_abs_diff(f.inv_sqrt() * f.sqrt(), Matrix::Identity(5, 5)), 1e-10);
}

TEST(SpdFactor, RejectsIndefiniteAndSingular) {
  EXPECT_THROW(spd_factor(from_rows({{1, 2}, {2, 1}})), NotSpdError);  // eigenvalues 3, -1
  const Matrix singular = from_rows({{1, 1}, {1, 1}});
  EXPECT_THROW(spd_factor(singular), NotSpdError);
  EXPECT_THROW(SpdFactor::from_weights(Vector{{1.0, 0.0}}), NotSpdError);
}

// --- module-level properties ---------------------------------------------

TEST(BackendProperties, EckartYoungAtDeskScale) {
  // Truncated SVD achieves the tail-energy error and beats random rank-r
  // competitors in both Frobenius and spectral norms.
  std::mt19937 gen(2024);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix a = random_matrix(6, 4, 300 + rep);
    const Vector sigma = testsupport::jacobi_singular_values(a);  // oracle
    const SvdResult s = svd_exact(a);
    for (Index r = 1; r <= 3; ++r) {
      const Matrix a_r =
          s.u.leftCols(r) * s.sigma.head(r).asDiagonal() * s.v.leftCols(r).transpose();
      const double err2 = (a - a_r).squaredNorm();
      const double tail = sigma.tail(sigma.size() - r).squaredNorm();
      EXPECT_NEAR(err2, tail, 1e-10 * std::max(1.0, tail));

      const double err_frob = (a - a_r).norm();
      const double err_spec = testsupport::spectral_norm(a - a_r);
      EXPECT_NEAR(err_spec, sigma[r], 1e-10);
      for (int cand = 0; cand < 200; ++cand) {
        const Matrix b = random_matrix(6, r, gen()) * random_matrix(r, 4, gen());
        EXPECT_GE((a - b).norm(), err_frob - 1e-10);
        EXPECT_GE(testsupport::spectral_norm(a - b), err_spec - 1e-10);
      }
    }
  }
}

TEST(BackendProperties, JohnsonLindenstraussDistancePreservation) {
  // k = ceil(8 ln n / eps^2) rows preserve nearly all pairwise squared
  // distances of an n-point cloud within (1 +- eps).
  const Index n = 200;
  const Index dim = 1000;
  const double eps = 0.5;
  const Index k = static_cast<Index>(
      std::ceil(8.0 * std::log(static_cast<double>(n)) / (eps * eps)));
  const Matrix cloud = random_matrix(n, dim, 555);

  for (unsigned seed = 0; seed < 2; ++seed) {
    const Matrix omega = gaussian_sketch(dim, k, RngSeed{seed});
    const Matrix projected = cloud * omega / std::sqrt(static_cast<double>(k));
    Index ok = 0;
    Index total = 0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double orig = (cloud.row(i) - cloud.row(j)).squaredNorm();
        const double proj = (projected.row(i) - projected.row(j)).squaredNorm();
        ++total;
        if (proj >= (1.0 - eps) * orig && proj <= (1.0 + eps) * orig) ++ok;
      }
    }
    EXPECT_GE(static_cast<double>(ok) / static_cast<double>(total), 0.99) << "seed " << seed;
  }
}

TEST(BackendProperties, ReconstructionAtNumericalRank) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const Vector sv{{3.0, 2.0, 1.0, 0.5}};
    const Matrix a = rank_k_matrix(20, 10, sv, 40 + seed);
    const SvdResult grp = svd_grp(a, 4, 5, RngSeed{seed});
    const Matrix approx = grp.u * grp.sigma.asDiagonal() * grp.v.transpose();
    EXPECT_LE((a - approx).norm() / std::max(1.0, a.norm()), 1e-8);
  }
}
