#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "normax/minimax.hpp"
#include "normax/report.hpp"

namespace normax {

/// Raised when no nonnegative weights satisfy the orthogonality system on the
/// active set — which certifies that the examined coefficients are NOT a best
/// approximation. `best_residual` is the smallest condition residual any
/// nonnegative convex weights can reach there.
struct not_optimal_error : std::runtime_error {
  double best_residual;
  not_optimal_error(const std::string& msg, double best)
      : std::runtime_error(msg), best_residual(best) {}
};

/// Dual optimality certificate: extremal points mu_j (as indices into Gamma)
/// and positive convex weights omega_j with
/// sum_j omega_j r(mu_j) conj(phi_i(mu_j)) = 0 for every basis function.
struct Certificate {
  std::vector<std::size_t> support;
  std::vector<double> omega;
  double condition_residual = 0.0;  // max_i |sum_j omega_j r_j conj(Phi_ji)|
  std::size_t ell = 0;
  Field mode = Field::Complex;

  Vec support_residuals;  // r(mu_j) at recovery time; feeds the worst-case xi
  double delta = 0.0;     // the optimum it certifies
  bool trivial = false;   // delta = 0 degenerate case
  bool pruned = false;    // support reduction ran; size bound is then binding
  bool prune_warning = false;  // pruning bailed on an ambiguous null direction
};

/// Indices j with |r_j| >= delta * (1 - active_tol). Activity is judged by
/// residual magnitude, never by Lawson weight (weights of active points can
/// be tiny at finite iteration counts).
std::vector<std::size_t> extract_active_set(const MinimaxSolution& sol,
                                            double active_tol = 1e-8);

/// Solve for the certificate weights on the active set by nonnegative least
/// squares over the stacked system {2k real orthogonality rows, one
/// normalization row}. Infeasibility throws not_optimal_error. delta = 0
/// degenerates to the trivial single-point certificate.
Certificate recover_weights(const MinimaxSolution& sol,
                            const EvaluationTable& table,
                            const std::vector<std::size_t>& active,
                            double cond_tol = 1e-8);

/// Result of sharpening a solver output on its extremal support.
struct PolishResult {
  MinimaxSolution sol;               // refined coefficients/residuals/delta
  std::vector<std::size_t> support;  // equalized support (Gamma indices)
  std::vector<double> omega;         // nonnegative unit-mass weights there
};

/// Newton-sharpen a (near-)converged solution on its stationarity system:
/// equal residual moduli across the support, residual orthogonal to the basis
/// under nonnegative unit-mass weights. Iterative reweighting locates the
/// optimal value to the duality gap but can leave the coefficients an order
/// sqrt(gap) away along flat directions of the max, which certificate
/// recovery would reject; closing the stationarity system removes that error.
/// Support candidates whose weight vanishes are dropped and the solve is
/// retried. Empty result means no reliable refinement was found and the
/// caller should keep the input solution.
std::optional<PolishResult> polish_on_support(const MinimaxSolution& sol,
                                              const EvaluationTable& table);

/// Reduce the support to the Caratheodory bound (2k+1 in complex mode, k+1 in
/// real mode when Gamma is entirely real) by null-direction weight exchange.
/// If a step's null direction is numerically ambiguous the input is returned
/// unchanged with prune_warning set.
Certificate caratheodory_prune(const Certificate& cert,
                               const EvaluationTable& table);

/// Re-derive every certificate claim from (sol, table): support validity and
/// activity, weight positivity and normalization, the orthogonality condition,
/// and the support size bound (binding only for pruned certificates;
/// informational otherwise, since recovery alone does not promise minimality).
Report verify_certificate(const Certificate& cert, const MinimaxSolution& sol,
                          const EvaluationTable& table, double tol = 1e-8);

/// min ||E x - e|| subject to x >= 0, for real-valued E (stored in a complex
/// container; imaginary parts must be zero). Active-set method: a min-norm
/// unrestricted solve is accepted outright when already nonnegative —
/// degenerate symmetric systems then keep their symmetric weights — otherwise
/// a standard Lawson–Hanson loop runs from scratch.
std::vector<double> nonnegative_least_squares(const DenseMatrix& E, const Vec& e);

/// Support size bound for the certificate: 2k+1 in complex mode, k+1 in real
/// mode when every point of Gamma is real (bound applies to the field the
/// theorem is used over, hence complex-mode bound when Gamma has non-real
/// points even for real matrices).
std::size_t caratheodory_bound(const EvaluationTable& table);

}  // namespace normax
