// Times the exact SVD against the Gaussian-sketch backend on matrices with a
// fast-decaying spectrum, and reports the accuracy of the sketched leading
// singular values. The crossover where sketching wins moves with hardware,
// but the shape of the comparison is the point.

#include <chrono>
#include <cstdio>

#include "dimred/backend.hpp"

using namespace dimred;

namespace {

template <typename F>
double time_once(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Matrix decaying_spectrum_matrix(Index n, Index p, Index rank, RngSeed seed) {
  const Matrix left = gaussian_sketch(n, rank, seed);
  const Matrix right = gaussian_sketch(p, rank, RngSeed{seed.value + 1});
  Vector sv(rank);
  for (Index i = 0; i < rank; ++i) sv[i] = std::pow(0.5, static_cast<double>(i));
  // orthonormalize the factors so sv really is the spectrum
  return qr_orthonormalize(left) * sv.asDiagonal() * qr_orthonormalize(right).transpose();
}

}  // namespace

int main() {
  const Index k = 10;
  std::printf("%-12s %12s %12s %14s\n", "size", "svd_exact", "svd_grp", "max rel err");
  for (const auto& shape : {std::pair<Index, Index>{400, 200}, {800, 400}, {1600, 600}}) {
    const Matrix a = decaying_spectrum_matrix(shape.first, shape.second, 40, RngSeed{7});

    SvdResult exact;
    const double t_exact = time_once([&] { exact = svd_exact(a); });
    SvdResult sketched;
    const double t_grp = time_once([&] { sketched = svd_grp(a, k, 5, RngSeed{1}); });

    double worst = 0.0;
    for (Index i = 0; i < k; ++i) {
      worst = std::max(worst, std::abs(sketched.sigma[i] - exact.sigma[i]) / exact.sigma[i]);
    }
    std::printf("%5td x %-5td %10.3fs %10.3fs %14.2e\n",
                static_cast<std::ptrdiff_t>(shape.first),
                static_cast<std::ptrdiff_t>(shape.second), t_exact, t_grp, worst);
  }
  return 0;
}
