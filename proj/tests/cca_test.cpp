#include "dimred/cca.hpp"

#include <cmath>
#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace dimred;
using testsupport::max_abs_diff;
using testsupport::random_matrix;

namespace {

Matrix centered(const Matrix& a) {
  return a.rowwise() - a.colwise().mean();
}

// Grid search over unit directions in two dimensions: the raw correlation
// objective, maximized brute force.
double grid_search_max_correlation(const Matrix& a, const Matrix& b, int steps = 2000) {
  const double pi = 3.14159265358979323846;
  std::vector<Vector> ya(steps), yb(steps);
  for (int s = 0; s < steps; ++s) {
    const double theta = pi * s / steps;
    const Vector u{{std::cos(theta), std::sin(theta)}};
    ya[s] = a * u;
    yb[s] = b * u;
  }
  double best = 0.0;
  for (int s = 0; s < steps; ++s) {
    const double na = ya[s].norm();
    if (na == 0.0) continue;
    for (int t = 0; t < steps; ++t) {
      const double nb = yb[t].norm();
      if (nb == 0.0) continue;
      best = std::max(best, std::abs(ya[s].dot(yb[t])) / (na * nb));
    }
  }
  return best;
}

}  // namespace

TEST(Cca, IdenticalBlocksAreFullyCorrelated) {
  const Matrix a = centered(random_matrix(8, 3, 1));
  const CcaResult r = cca(a, a);
  for (Index j = 0; j < r.correlations.size(); ++j) {
    EXPECT_NEAR(r.correlations[j], 1.0, 1e-10);
  }
}

TEST(Cca, OrthogonalBlocksAreUncorrelated) {
  const Matrix q = testsupport::random_orthonormal(10, 5, 2);
  const Matrix a = q.leftCols(2);
  const Matrix b = q.rightCols(3);
  const CcaResult r = cca(a, b);
  EXPECT_LE(r.correlations.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Cca, MatchesGridSearchOracle) {
  for (unsigned seed = 0; seed < 3; ++seed) {
    const Matrix a = centered(random_matrix(6, 2, 10 + seed));
    const Matrix b = centered(random_matrix(6, 2, 20 + seed));
    const CcaResult r = cca(a, b);
    const double oracle = grid_search_max_correlation(a, b);
    EXPECT_NEAR(r.correlations[0], oracle, 1e-3) << "seed " << seed;
  }
}

TEST(Cca, ResultInvariants) {
  const Matrix a = centered(random_matrix(9, 3, 31));
  const Matrix b = centered(random_matrix(9, 2, 32));
  const CcaResult r = cca(a, b);
  const Index k = r.correlations.size();

  for (Index j = 0; j < k; ++j) {
    EXPECT_NEAR(r.variates_a.col(j).norm(), 1.0, 1e-8);
    EXPECT_NEAR(r.variates_b.col(j).norm(), 1.0, 1e-8);
    EXPECT_NEAR(r.variates_a.col(j).dot(r.variates_b.col(j)), r.correlations[j], 1e-6);
    EXPECT_GE(r.correlations[j], 0.0);
    EXPECT_LE(r.correlations[j], 1.0 + 1e-10);
  }
  for (Index j = 1; j < k; ++j) EXPECT_GE(r.correlations[j - 1], r.correlations[j]);
  EXPECT_LT(max_abs_diff(r.variates_a.transpose() * r.variates_a, Matrix::Identity(k, k)),
            1e-6);
  EXPECT_LT(max_abs_diff(r.variates_b.transpose() * r.variates_b, Matrix::Identity(k, k)),
            1e-6);
  // variates reproduce from loadings
  EXPECT_LT(max_abs_diff(r.variates_a, a * r.loadings_a), 1e-12);
  EXPECT_LT(max_abs_diff(r.variates_b, b * r.loadings_b), 1e-12);
}

TEST(Cca, FixedPointPropertyOfProjectors) {
  const Matrix a = centered(random_matrix(8, 3, 41));
  const Matrix b = centered(random_matrix(8, 2, 42));
  const CcaResult r = cca(a, b);
  const CanonicalProjectors proj = canonical_projectors(a, b);
  for (Index j = 0; j < r.correlations.size(); ++j) {
    const double lambda2 = r.correlations[j] * r.correlations[j];
    const Vector lhs = proj.a * (proj.b * r.variates_a.col(j));
    EXPECT_LT((lhs - lambda2 * r.variates_a.col(j)).norm(), 1e-6);
  }
}

TEST(Cca, ScaleInvarianceUnderColumnMixing) {
  const Matrix a = centered(random_matrix(10, 3, 51));
  const Matrix b = centered(random_matrix(10, 2, 52));
  Matrix g = random_matrix(3, 3, 53);
  g += 3.0 * Matrix::Identity(3, 3);  // keep it invertible
  const CcaResult base = cca(a, b);
  const CcaResult mixed = cca(Matrix(a * g), b);
  EXPECT_LT((base.correlations - mixed.correlations).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Cca, SwapsWideBlocksInternally) {
  const Matrix a = centered(random_matrix(9, 2, 61));
  const Matrix b = centered(random_matrix(9, 4, 62));
  const CcaResult r = cca(a, b);  // q > p triggers the internal swap
  EXPECT_EQ(r.loadings_a.rows(), 2);
  EXPECT_EQ(r.loadings_b.rows(), 4);
  const CcaResult flipped = cca(b, a);
  EXPECT_LT((r.correlations - flipped.correlations).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(max_abs_diff(r.variates_a, flipped.variates_b), 1e-12);
}

TEST(Cca, SingularBlockIsReported) {
  Matrix a = centered(random_matrix(7, 2, 71));
  a.conservativeResize(7, 3);
  a.col(2) = a.col(0) + a.col(1);  // collinear
  const Matrix b = centered(random_matrix(7, 2, 72));
  try {
    cca(a, b);
    FAIL() << "expected SingularBlockError";
  } catch (const SingularBlockError& e) {
    EXPECT_EQ(e.block, "a");
  }
}

TEST(Cca, UncenteredInputTriggersWarning) {
  Matrix a = random_matrix(8, 2, 81);
  a.array() += 5.0;
  const Matrix b = centered(random_matrix(8, 2, 82));
  const CcaResult r = cca(a, b);
  ASSERT_FALSE(r.warnings.empty());
  const CcaResult clean = cca(centered(a), b);
  EXPECT_TRUE(clean.warnings.empty());
}

TEST(Cca, DimensionMismatchRejected) {
  EXPECT_THROW(cca(random_matrix(5, 2, 1), random_matrix(6, 2, 2)), DimensionMismatchError);
}

TEST(CanonicalProjectors, FullSpanGivesIdentity) {
  const Matrix a = random_matrix(4, 4, 91);
  const CanonicalProjectors proj = canonical_projectors(a, random_matrix(4, 2, 92));
  EXPECT_LT(max_abs_diff(proj.a, Matrix::Identity(4, 4)), 1e-8);
}

TEST(CanonicalProjectors, ProjectorFixesItsSpan) {
  const Matrix a = centered(random_matrix(8, 3, 93));
  const Matrix b = centered(random_matrix(8, 2, 94));
  const CanonicalProjectors proj = canonical_projectors(a, b);
  EXPECT_LT(max_abs_diff(proj.a * a, a), 1e-10);
  EXPECT_LT(max_abs_diff(proj.b * b, b), 1e-10);
  EXPECT_LT(max_abs_diff(proj.a * proj.a, proj.a), 1e-10);
  EXPECT_LT(max_abs_diff(proj.b * proj.b, proj.b), 1e-10);
}

TEST(CanonicalProjectors, ProductEigenvaluesAreSquaredCorrelations) {
  const Matrix a = centered(random_matrix(8, 2, 95));
  const Matrix b = centered(random_matrix(8, 2, 96));
  const CcaResult r = cca(a, b);
  const CanonicalProjectors proj = canonical_projectors(a, b);

  // eigendecomposition oracle of P_a P_b through Eigen directly
  const Eigen::EigenSolver<Matrix> solver(proj.a * proj.b);
  std::vector<double> eigs;
  for (Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const auto ev = solver.eigenvalues()[i];
    if (std::abs(ev.real()) > 1e-10) eigs.push_back(ev.real());
  }
  std::sort(eigs.begin(), eigs.end(), std::greater<>());
  ASSERT_GE(eigs.size(), static_cast<std::size_t>(r.correlations.size()));
  for (Index j = 0; j < r.correlations.size(); ++j) {
    EXPECT_NEAR(eigs[static_cast<std::size_t>(j)],
                r.correlations[j] * r.correlations[j], 1e-6);
  }
}
