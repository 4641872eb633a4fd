#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "normax/minimax.hpp"
#include "normax/problem.hpp"
#include "normax/report.hpp"

namespace normax {

/// A = Q diag(lambdas) Q^H with Q unitary. Real mode additionally carries the
/// conjugation involution: lambda_{pairing[j]} = conj(lambda_j) and
/// q_{pairing[j]} = conj(q_j) columnwise (empty vector = no pairing given).
struct SpectralDecomposition {
  DenseMatrix Q;
  Vec lambdas;
  Field mode = Field::Complex;
  std::vector<std::size_t> pairing;

  std::size_t n() const { return lambdas.size(); }
};

/// Check unitarity, the real-mode pairing, and (when A is supplied)
/// reconstruction and normality. Report-based; never throws on bad data.
Report validate_decomposition(const SpectralDecomposition& decomp,
                              const DenseMatrix* A = nullptr, double tol = 1e-8);

/// g(A) = Q diag(g_values) Q^H.
DenseMatrix apply_function_table(const SpectralDecomposition& decomp,
                                 const Vec& g_values);

/// Try to construct the conjugation involution for a real-matrix
/// decomposition by matching conjugate eigenvalues with conjugate eigenvector
/// columns. Empty result means no consistent pairing exists.
std::optional<std::vector<std::size_t>> derive_real_pairing(
    const DenseMatrix& Q, const Vec& lambdas, double tol = 1e-8);

struct VectorApprox {
  double value = 0.0;
  Coefficients alpha;
};

/// Distance from f(A)v to span{phi_i(A)v} for unit v (v is normalized
/// internally), computed in the eigenbasis: with w = Q^H v this is a
/// |w_j|^2-weighted least-squares problem over the table rows expanded
/// through the multiplicity map. Real mode minimizes over real coefficients
/// (stacked real/imaginary rows).
VectorApprox best_vector_approx(const SpectralDecomposition& decomp,
                                const EvaluationTable& table, const Vec& v);

/// min over coefficients of ||f(A) - sum alpha_i phi_i(A)||_2, which for
/// normal A is the scalar minimax optimum on the spectrum.
double minmax_matrix_value(const SpectralDecomposition& decomp,
                           const EvaluationTable& table,
                           const SolveOptions& opts = {});

struct SampleResult {
  double max_value = 0.0;
  Vec argmax;
};

/// Empirical maximum of best_vector_approx over `trials` random unit vectors
/// (real vectors in real mode), plus `include` when given; the best sample is
/// then locally polished by at most 100 projected-gradient ascent steps.
/// Deterministic for fixed (seed, trials): each trial draws from its own
/// substream keyed by (seed, trial index), so execution order cannot matter.
SampleResult sample_maxmin(const SpectralDecomposition& decomp,
                           const EvaluationTable& table, std::size_t trials,
                           std::uint64_t seed, const Vec* include = nullptr);

/// Pairwise commuting normal matrices A_0..A_k given through a common unitary
/// U and their diagonals; explicit matrices are optional and only used for
/// validation against the declared diagonalization.
struct CommutingFamily {
  DenseMatrix U;
  std::vector<Vec> diagonals;
  std::vector<DenseMatrix> matrices;  // empty or diagonals.size() entries
};

struct CommutingProblem {
  PointSet gamma;
  EvaluationTable table;
  SpectralDecomposition decomp;
};

/// Reformulate min_alpha ||A_0 - sum alpha_i A_i|| as a scalar problem:
/// Gamma = integer labels of the distinct diagonal tuples, f/phi_i read off
/// the diagonals, decomposition (U, labels). Rows with identical tuples
/// across the whole family merge into one point.
CommutingProblem build_commuting_problem(const CommutingFamily& family);

/// Inverse of the multiplicity map: original index -> Gamma row.
std::vector<std::size_t> eigen_to_gamma_row(const PointSet& gamma);

}  // namespace normax
