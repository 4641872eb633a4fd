#include "normax/pipeline.hpp"

#include <cmath>

namespace normax {

SpectralDecomposition canonical_decomposition(const PointSet& gamma,
                                              Field mode) {
  const std::vector<std::size_t> row = eigen_to_gamma_row(gamma);
  const std::size_t N = row.size();
  SpectralDecomposition d;
  d.mode = mode;
  d.lambdas.resize(N);
  for (std::size_t j = 0; j < N; ++j) d.lambdas[j] = gamma.points[row[j]];

  if (mode == Field::Complex) {
    d.Q = DenseMatrix::identity(N);
    return d;
  }

  const double tol = default_point_tol(gamma.points);
  d.Q = DenseMatrix(N, N);
  d.pairing.assign(N, N);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t j = 0; j < N; ++j) {
    if (d.pairing[j] != N) continue;
    if (std::abs(d.lambdas[j].imag()) <= tol) {
      d.pairing[j] = j;
      d.Q(j, j) = 1.0;
      continue;
    }
    // First unpaired index carrying the conjugate eigenvalue.
    std::size_t v = N;
    for (std::size_t t = j + 1; t < N && v == N; ++t)
      if (d.pairing[t] == N &&
          std::abs(d.lambdas[t] - std::conj(d.lambdas[j])) <= tol)
        v = t;
    if (v == N)
      throw validation_error("canonical_decomposition: real mode needs "
                             "conjugate-balanced eigenvalue multiplicities");
    d.pairing[j] = v;
    d.pairing[v] = j;
    d.Q(j, j) = inv_sqrt2;
    d.Q(v, j) = Cx(0.0, -inv_sqrt2);
    d.Q(j, v) = inv_sqrt2;
    d.Q(v, v) = Cx(0.0, inv_sqrt2);
  }
  return d;
}

PipelineResult run_pipeline(const EvaluationTable& table,
                            const SpectralDecomposition& decomp,
                            const PipelineOptions& opts) {
  PipelineResult res;
  res.sol = solve_minimax(table, opts.solve);
  const double pre_gap_rel =
      std::max(0.0, res.sol.delta - res.sol.lower_bound) /
      std::max(1.0, res.sol.delta);
  // A solve that stalled close to the optimum can still be rescued by the
  // sharpening step below; anything farther out is a genuine failure.
  if (!res.sol.converged && pre_gap_rel > 1e-3)
    throw convergence_error(
        "pipeline: minimax solve missed the requested duality gap",
        res.sol.delta - res.sol.lower_bound);

  if (table.mode == Field::Real) {
    res.sol.alpha_star = realize_polynomial(res.sol.alpha_star, table);
    res.sol.residuals = residuals_for(table, res.sol.alpha_star.alpha);
    double d = 0.0;
    for (const Cx& r : res.sol.residuals) d = std::max(d, std::abs(r));
    res.sol.delta = d;
  }

  // Sharpen the coefficients on the (near-)active support: the reweighted
  // iteration localizes the optimal value to the duality gap but can leave
  // the coefficients ~sqrt(gap) off along flat directions, which is too loose
  // for the orthogonality system below. The equalized weights also furnish a
  // dual bound that can certify convergence for a rescued solve.
  if (auto pol = polish_on_support(res.sol, table)) {
    std::vector<double> w(table.n(), 0.0);
    for (std::size_t j = 0; j < pol->support.size(); ++j)
      w[pol->support[j]] = pol->omega[j];
    double lb = 0.0;
    try {
      lb = dual_lower_bound(table, w);
    } catch (const validation_error&) {
      lb = 0.0;
    }
    pol->sol.lower_bound = std::max(pol->sol.lower_bound, lb);
    pol->sol.converged =
        res.sol.converged ||
        (pol->sol.delta - pol->sol.lower_bound <=
         opts.solve.gap_tol * std::max(1.0, pol->sol.delta));
    res.sol = std::move(pol->sol);
  }
  if (!res.sol.converged)
    throw convergence_error(
        "pipeline: minimax solve missed the requested duality gap",
        res.sol.delta - res.sol.lower_bound);

  const std::vector<std::size_t> active =
      extract_active_set(res.sol, opts.active_tol);
  res.cert = recover_weights(res.sol, table, active, opts.cond_tol);
  if (opts.prune) res.cert = caratheodory_prune(res.cert, table);

  if (table.mode == Field::Real) {
    res.symcert = symmetrize_certificate(res.cert, table.gamma);
    res.has_sym = true;
    res.wcv = real_worst_vector(res.symcert, decomp, table.gamma);
  } else {
    res.wcv = complex_worst_vector(res.cert, decomp, table.gamma);
  }
  res.attained_check = best_vector_approx(decomp, table, res.wcv.v_star).value;
  return res;
}

}  // namespace normax
