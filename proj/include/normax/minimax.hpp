#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "normax/problem.hpp"

namespace normax {

struct MinimaxSolution {
  Coefficients alpha_star;
  double delta = 0.0;        // max_j |r_j|, recomputed from residuals
  Vec residuals;             // r_j = F_j - (Phi alpha)_j
  double lower_bound = 0.0;  // sqrt(sum_j omega_j |r_j|^2) at the final weights
  std::vector<double> lawson_weights;  // convex weights, length n
  std::size_t iterations = 0;
  bool converged = false;
  Field mode = Field::Complex;
  // One entry per iteration: the weighted error sqrt(sum omega_j |r_j|^2).
  // Kept because its monotone growth is the solver's behavioral contract.
  std::vector<double> weighted_error_log;
};

struct SolveOptions {
  double gap_tol = 1e-10;
  std::size_t max_iter = 100000;
  double weight_floor = 1e-300;
  // Starting weights (normalized internally); empty selects uniform 1/n.
  // Different starts must agree on delta within 10*gap_tol.
  std::vector<double> initial_weights;
};

/// Best uniform approximation of F from the span of Phi's columns on Gamma,
/// by Lawson's iteratively reweighted least squares:
///
///   omega^0 = 1/n;  alpha^t = argmin sum omega^t_j |r_j|^2;
///   omega^{t+1}_j = omega^t_j |r^t_j| / sum_i omega^t_i |r^t_i|.
///
/// The fixed point of this update satisfies the orthogonality system
/// sum_j omega_j r_j conj(Phi_{j,i}) = 0, so the terminal weights double as
/// the dual optimality certificate seed. Convergence is certified by the gap
/// max|r| - sqrt(sum omega |r|^2) (weak duality); if the gap stalls, a short
/// |r|^2-reweighted burst is tried and kept only when it preserves the
/// monotone weighted error. Non-convergence returns the best iterate with
/// converged = false rather than throwing.
MinimaxSolution solve_minimax(const EvaluationTable& table,
                              const SolveOptions& opts = {});

/// sqrt(sum_j omega_j |r_j(alpha_omega)|^2) at the omega-weighted LS optimum;
/// a lower bound on delta for any convex weights (weighted mean <= max).
double dual_lower_bound(const EvaluationTable& table,
                        std::span<const double> omega);

/// r = F - Phi alpha.
Vec residuals_for(const EvaluationTable& table, const Vec& alpha);

}  // namespace normax
