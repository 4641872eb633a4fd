#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace normax {

using Cx = std::complex<double>;
using Vec = std::vector<Cx>;

/// Malformed or inconsistent input (dimension mismatches, bad schemas, NaNs).
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iteration hit its cap before reaching the requested tolerance.
/// `achieved` carries the best residual/gap reached so callers can report it.
struct convergence_error : std::runtime_error {
  double achieved;
  convergence_error(const std::string& msg, double achieved_)
      : std::runtime_error(msg), achieved(achieved_) {}
};

/// Dense row-major complex matrix. Deliberately minimal: the solvers below
/// only need element access, products, and adjoints.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Cx> a;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  Cx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Cx& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static DenseMatrix identity(std::size_t n);
};

double norm2(const Vec& v);
/// Inner product, conjugate-linear in the first argument.
Cx dot(const Vec& x, const Vec& y);
bool all_finite(const Vec& v);
bool all_finite(const DenseMatrix& m);

struct EigResult {
  DenseMatrix Q;                // unitary, eigenvectors in columns
  std::vector<double> lambdas;  // ascending, matching Q's columns
  std::size_t sweeps = 0;
};

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations
/// with a phase factor per pivot. Quadratically convergent and unconditionally
/// stable for the matrix sizes this library targets; using it avoids dragging
/// in an external eigenpackage for what is a side concern here.
///
/// Throws validation_error if H deviates from Hermitian by more than
/// `tol * ||H||_F`, convergence_error if the off-diagonal mass has not
/// dropped below 1e-14 * n * ||H||_F within 60 sweeps.
EigResult hermitian_eig(const DenseMatrix& H, double tol = 1e-10);

/// argmin_a sum_j omega_j |F_j - (Phi a)_j|^2 via column-pivoted Householder QR
/// of the sqrt(omega)-scaled system. Columns whose pivot falls below
/// 1e-12 * |R_00| are treated as dependent; the minimum-norm solution is
/// returned in that case, so degenerate weight vectors (e.g. supported on
/// fewer points than there are basis functions) still give a well-defined
/// answer. Requires omega_j >= 0 with at least one positive entry.
Vec weighted_least_squares(const DenseMatrix& Phi, const Vec& F,
                           std::span<const double> omega);

/// Largest singular value. Small matrices go through hermitian_eig of the
/// Gram matrix; larger ones use safeguarded power iteration on M^H M with a
/// deterministic start vector (monotone Rayleigh estimates, relative stopping
/// test, capped at 1e4 iterations).
double spectral_norm(const DenseMatrix& M, double tol = 1e-12);

/// Gaussian deviates: Box-Muller over mt19937_64, no libstdc++ distribution
/// objects, so streams are bit-reproducible across standard libraries.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}
  double next();

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Decorrelated per-stream seed (splitmix64 mix of seed and stream index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Haar-ish unit vector: iid complex (or real) Gaussian entries, normalized.
Vec random_unit_vector(std::size_t n, std::uint64_t seed, bool real_only = false);

}  // namespace normax
