// Timing harness for the parallel kernels against their serial references,
// plus one end-to-end sampling workload. Run manually; not part of ctest.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "normax/kernels.hpp"
#include "normax/matrix_bridge.hpp"
#include "normax/pipeline.hpp"

using namespace normax;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  GaussianStream g(seed);
  DenseMatrix m(r, c);
  for (auto& z : m.a) z = Cx(g.next(), g.next());
  return m;
}

template <typename F>
double best_ms(F&& f, int reps) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.a.size(); ++i)
    d = std::max(d, std::abs(a.a[i] - b.a[i]));
  return d;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n");
#endif

  std::printf("\n%-8s %-12s %-12s %-9s %s\n", "n", "serial(ms)", "parallel(ms)",
              "speedup", "max|diff|");
  for (std::size_t n : {64, 128, 256, 384}) {
    const DenseMatrix A = random_matrix(n, n, 11 + n);
    const DenseMatrix B = random_matrix(n, n, 23 + n);
    DenseMatrix r1, r2;
    const double ts = best_ms([&] { r1 = matmul_serial(A, B); }, 3);
    const double tp = best_ms([&] { r2 = matmul(A, B); }, 3);
    std::printf("mm %-5zu %-12.3f %-12.3f %-9.2f %.1e\n", n, ts, tp, ts / tp,
                max_abs_diff(r1, r2));
  }
  for (std::size_t n : {512, 1024, 2048}) {
    const DenseMatrix A = random_matrix(n, n, 31 + n);
    Vec x(n);
    GaussianStream g(7);
    for (auto& z : x) z = Cx(g.next(), g.next());
    Vec y1, y2;
    const double ts = best_ms([&] { y1 = matvec_serial(A, x); }, 5);
    const double tp = best_ms([&] { y2 = matvec(A, x); }, 5);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(y1[i] - y2[i]));
    std::printf("mv %-5zu %-12.3f %-12.3f %-9.2f %.1e\n", n, ts, tp, ts / tp, d);
  }

  // Sampling workload: random unitary eigenbasis, degree-3 monomial system.
  {
    const std::size_t n = 48;
    DenseMatrix H = random_matrix(n, n, 97);
    const DenseMatrix Ht = adjoint(H);
    for (std::size_t i = 0; i < H.a.size(); ++i)
      H.a[i] = 0.5 * (H.a[i] + Ht.a[i]);
    const EigResult eig = hermitian_eig(H);

    GaussianStream g(5);
    Vec lambdas(n);
    for (auto& z : lambdas) z = Cx(g.next(), g.next());
    SpectralDecomposition d{eig.Q, lambdas, Field::Complex, {}};
    const PointSet gamma = from_spectrum(lambdas);
    const auto table = build_basis_problem(gamma, BasisKind::gmres(3),
                                           Field::Complex);
    const double tms =
        best_ms([&] { sample_maxmin(d, table, 256, 2024); }, 2);
    std::printf("\nsample_maxmin(n=48, trials=256): %.1f ms\n", tms);
  }
  return 0;
}
