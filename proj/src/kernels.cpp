#include "normax/kernels.hpp"

#include <cmath>

namespace normax {

namespace {

void check_mul_dims(const DenseMatrix& A, std::size_t inner, const char* what) {
  if (A.cols != inner)
    throw validation_error(std::string(what) + ": inner dimensions disagree");
}

// Accumulate C[i,:] += A(i,l) * B[l,:] for one output row. Shared by the
// serial and parallel gemm so the summation order is identical in both.
inline void gemm_row(const DenseMatrix& A, const DenseMatrix& B, DenseMatrix& C,
                     std::size_t i) {
  Cx* ci = &C.a[i * C.cols];
  for (std::size_t l = 0; l < A.cols; ++l) {
    const Cx ail = A(i, l);
    if (ail == Cx{}) continue;
    const Cx* bl = &B.a[l * B.cols];
    for (std::size_t j = 0; j < B.cols; ++j) ci[j] += ail * bl[j];
  }
}

inline Cx dot_row(const DenseMatrix& A, const Vec& x, std::size_t i) {
  Cx acc{};
  const Cx* ai = &A.a[i * A.cols];
  for (std::size_t j = 0; j < A.cols; ++j) acc += ai[j] * x[j];
  return acc;
}

}  // namespace

DenseMatrix matmul_serial(const DenseMatrix& A, const DenseMatrix& B) {
  check_mul_dims(A, B.rows, "matmul");
  DenseMatrix C(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i) gemm_row(A, B, C, i);
  return C;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  check_mul_dims(A, B.rows, "matmul");
  DenseMatrix C(A.rows, B.cols);
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(A.rows);
#pragma omp parallel for schedule(static) if (A.rows * B.cols >= 4096)
  for (std::ptrdiff_t i = 0; i < m; ++i)
    gemm_row(A, B, C, static_cast<std::size_t>(i));
  return C;
}

Vec matvec_serial(const DenseMatrix& A, const Vec& x) {
  check_mul_dims(A, x.size(), "matvec");
  Vec y(A.rows);
  for (std::size_t i = 0; i < A.rows; ++i) y[i] = dot_row(A, x, i);
  return y;
}

Vec matvec(const DenseMatrix& A, const Vec& x) {
  check_mul_dims(A, x.size(), "matvec");
  Vec y(A.rows);
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(A.rows);
#pragma omp parallel for schedule(static) if (A.rows >= 256)
  for (std::ptrdiff_t i = 0; i < m; ++i)
    y[static_cast<std::size_t>(i)] = dot_row(A, x, static_cast<std::size_t>(i));
  return y;
}

DenseMatrix adjoint(const DenseMatrix& A) {
  DenseMatrix T(A.cols, A.rows);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) T(j, i) = std::conj(A(i, j));
  return T;
}

double frob_norm(const DenseMatrix& A) {
  double s = 0.0;
  for (const Cx& v : A.a) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace normax
