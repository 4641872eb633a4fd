#include <cstddef>

#include "doctest.h"
#include "normax/kernels.hpp"
#include "normax/numerics.hpp"

using namespace normax;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  GaussianStream g(seed);
  DenseMatrix m(r, c);
  for (auto& z : m.a) z = Cx(g.next(), g.next());
  return m;
}

}  // namespace

TEST_CASE("matrix product matches the serial reference bit for bit") {
  // Sizes straddle the parallel dispatch threshold on purpose.
  for (std::size_t n : {3, 17, 40, 96}) {
    const DenseMatrix A = random_matrix(n, n + 1, 100 + n);
    const DenseMatrix B = random_matrix(n + 1, n, 200 + n);
    const DenseMatrix P = matmul(A, B);
    const DenseMatrix S = matmul_serial(A, B);
    REQUIRE(P.rows == S.rows);
    REQUIRE(P.cols == S.cols);
    for (std::size_t i = 0; i < P.a.size(); ++i) {
      CHECK(P.a[i].real() == S.a[i].real());
      CHECK(P.a[i].imag() == S.a[i].imag());
    }
  }
}

TEST_CASE("matrix-vector product matches the serial reference bit for bit") {
  for (std::size_t n : {5, 64, 300}) {
    const DenseMatrix A = random_matrix(n, n, 300 + n);
    GaussianStream g(400 + n);
    Vec x(n);
    for (auto& z : x) z = Cx(g.next(), g.next());
    const Vec y = matvec(A, x);
    const Vec s = matvec_serial(A, x);
    REQUIRE(y.size() == s.size());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(y[i].real() == s[i].real());
      CHECK(y[i].imag() == s[i].imag());
    }
  }
}

TEST_CASE("adjoint is an involution and reverses products") {
  const DenseMatrix A = random_matrix(6, 4, 7);
  const DenseMatrix B = random_matrix(4, 5, 8);

  const DenseMatrix AH = adjoint(A);
  REQUIRE(AH.rows == 4);
  REQUIRE(AH.cols == 6);
  const DenseMatrix AHH = adjoint(AH);
  for (std::size_t i = 0; i < A.a.size(); ++i) CHECK(AHH.a[i] == A.a[i]);

  // (AB)^H and B^H A^H run through the same accumulation order on conjugated
  // values, so they agree exactly, not just approximately.
  const DenseMatrix lhs = adjoint(matmul(A, B));
  const DenseMatrix rhs = matmul(adjoint(B), adjoint(A));
  REQUIRE(lhs.rows == rhs.rows);
  REQUIRE(lhs.cols == rhs.cols);
  for (std::size_t i = 0; i < lhs.a.size(); ++i) CHECK(lhs.a[i] == rhs.a[i]);
}

TEST_CASE("frobenius norm of a hand-checked matrix") {
  DenseMatrix m(2, 2);
  m(0, 0) = Cx(3, 0);
  m(0, 1) = Cx(0, 4);
  m(1, 0) = Cx(0, 0);
  m(1, 1) = Cx(0, 0);
  CHECK(frob_norm(m) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("the identity is a two-sided unit for the matrix product") {
  const DenseMatrix A = random_matrix(9, 9, 42);
  const DenseMatrix I = DenseMatrix::identity(9);
  const DenseMatrix L = matmul(I, A);
  const DenseMatrix R = matmul(A, I);
  for (std::size_t i = 0; i < A.a.size(); ++i) {
    CHECK(L.a[i] == A.a[i]);
    CHECK(R.a[i] == A.a[i]);
  }
}
