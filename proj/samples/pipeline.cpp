// Walks the main entry points on a small synthetic dataset: scaled-centered
// PCA with both exact backends, the randomized backend on a low-rank matrix,
// correspondence analysis of a contingency table, and a round trip through
// classical MDS.

#include <cstdio>

#include "dimred/backend.hpp"
#include "dimred/coa.hpp"
#include "dimred/mds.hpp"
#include "dimred/pca.hpp"
#include "dimred/quality.hpp"

using namespace dimred;

int main() {
  // Ten items, three correlated measurements.
  Matrix a(10, 3);
  a << 5.1, 3.5, 1.4, 4.9, 3.0, 1.4, 6.2, 3.4, 5.4, 5.9, 3.0, 5.1, 6.5, 3.0, 5.2, 5.7, 2.8, 4.1,
      6.3, 3.3, 6.0, 4.6, 3.1, 1.5, 6.9, 3.1, 5.1, 5.0, 3.6, 1.4;

  const PcaResult pca = pca_scaled_centered(a);
  std::printf("scaled-centered PCA eigenvalues (sum = #columns):\n");
  for (Index j = 0; j < pca.eigenvalues.size(); ++j) {
    std::printf("  lambda_%td = %.6f\n", static_cast<std::ptrdiff_t>(j), pca.eigenvalues[j]);
  }
  const QualityReport quality = quality_metrics(pca, pca.eigenvalues);
  std::printf("rank for 95%% accuracy: %td\n",
              static_cast<std::ptrdiff_t>(rank_for_accuracy(pca.eigenvalues, 0.95)));
  std::printf("first axis keeps %.1f%% of the cloud\n\n", 100.0 * quality.axis_share[0]);

  // Randomized backend on a larger rank-2 matrix.
  const Matrix left = gaussian_sketch(300, 2, RngSeed{1});
  const Matrix right = gaussian_sketch(40, 2, RngSeed{2});
  const Matrix low_rank = left * right.transpose();
  const SvdResult sketched = svd_grp(low_rank, 2, 5, RngSeed{3});
  std::printf("randomized SVD of a 300x40 rank-2 matrix: sigma = %.4f, %.4f\n\n",
              sketched.sigma[0], sketched.sigma[1]);

  // Correspondence analysis of a small contingency table.
  Matrix counts(3, 3);
  counts << 32, 12, 5, 10, 28, 12, 4, 9, 33;
  const ContingencyTable table(counts);
  const CoaResult ca = coa(table);
  const ChiSquareStat chi2 = chi_square(table);
  std::printf("CoA: spectrum total %.6f vs chi-square %.6f (count scale %.2f)\n\n",
              ca.lambda.sum(), chi2.frequency_scale, chi2.count_scale);

  // Classical MDS round trip on a triangle.
  Matrix dists(3, 3);
  dists << 0, 3, 4, 3, 0, 5, 4, 5, 0;
  const MdsResult embedding = mds(DistanceMatrix(dists), 2);
  std::printf("MDS of a 3-4-5 triangle: stress %.2e, negative eigenvalues: %td\n",
              embedding_stress(DistanceMatrix(dists), embedding.coords),
              static_cast<std::ptrdiff_t>(embedding.n_negative));
  return 0;
}
