#include "normax/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normax/kernels.hpp"

namespace normax {

Vec residuals_for(const EvaluationTable& table, const Vec& alpha) {
  if (alpha.size() != table.k())
    throw validation_error("residuals_for: coefficient count mismatch");
  Vec r = matvec(table.Phi, alpha);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = table.F[j] - r[j];
  return r;
}

namespace {

struct Iterate {
  Vec alpha;
  Vec r;
  double delta = 0.0;
  double werr = 0.0;
};

Iterate lawson_step(const EvaluationTable& table, const std::vector<double>& w) {
  Iterate it;
  it.alpha = weighted_least_squares(table.Phi, table.F, w);
  it.r = residuals_for(table, it.alpha);
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double m = std::abs(it.r[j]);
    it.delta = std::max(it.delta, m);
    s += w[j] * m * m;
  }
  it.werr = std::sqrt(s);
  return it;
}

// omega_j <- omega_j |r_j|^gamma, normalized, with a floor that zeroes
// denormal-range stragglers. Returns false when the update annihilates every
// weight (all mass sat on zero-residual points).
bool update_weights(std::vector<double>& w, const Vec& r, int gamma,
                    double floor_) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    double m = std::abs(r[j]);
    if (gamma == 2) m *= m;
    w[j] *= m;
    s += w[j];
  }
  if (!(s > 0.0)) return false;
  double s2 = 0.0;
  for (double& x : w) {
    x /= s;
    if (x < floor_) x = 0.0;
    s2 += x;
  }
  if (!(s2 > 0.0)) return false;
  if (s2 != 1.0)
    for (double& x : w) x /= s2;
  return true;
}

}  // namespace

MinimaxSolution solve_minimax(const EvaluationTable& table,
                              const SolveOptions& opts) {
  const std::size_t n = table.n(), k = table.k();
  if (n == 0) throw validation_error("solve_minimax: empty table");
  if (k == 0) throw validation_error("solve_minimax: no basis functions");
  if (table.F.size() != n || table.Phi.rows != n)
    throw validation_error("solve_minimax: table dimensions inconsistent");

  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  if (!opts.initial_weights.empty()) {
    if (opts.initial_weights.size() != n)
      throw validation_error("solve_minimax: initial_weights length mismatch");
    double s = 0.0;
    for (double x : opts.initial_weights) {
      if (!(x >= 0.0))
        throw validation_error("solve_minimax: initial weights must be >= 0");
      s += x;
    }
    if (!(s > 0.0))
      throw validation_error("solve_minimax: initial weights must not all vanish");
    for (std::size_t j = 0; j < n; ++j) w[j] = opts.initial_weights[j] / s;
  }

  MinimaxSolution out;
  out.mode = table.mode;

  Iterate best;
  std::vector<double> best_w;
  double best_gap = std::numeric_limits<double>::infinity();

  // Stagnation window bookkeeping (gap must shrink by 0.999 per 50 iters,
  // else a 10-iteration |r|^2 burst is attempted).
  double anchor_gap = std::numeric_limits<double>::infinity();
  std::size_t anchor_t = 0;
  std::size_t burst_left = 0;
  int restarts = 0;

  std::size_t t = 0;
  for (t = 1; t <= opts.max_iter; ++t) {
    const Iterate cur = lawson_step(table, w);
    out.weighted_error_log.push_back(cur.werr);
    const double gap = cur.delta - cur.werr;

    const double rel_gap = gap / std::max(1.0, cur.delta);
    if (rel_gap < best_gap) {
      best_gap = rel_gap;
      best = cur;
      best_w = w;
    }

    if (gap <= opts.gap_tol * std::max(1.0, cur.delta)) {
      out.alpha_star.alpha = cur.alpha;
      out.residuals = cur.r;
      out.delta = cur.delta;
      out.lower_bound = std::min(cur.werr, cur.delta);
      out.lawson_weights = w;
      out.iterations = t;
      out.converged = true;
      return out;
    }

    if (t - anchor_t >= 50) {
      if (gap > 0.999 * anchor_gap && burst_left == 0) burst_left = 10;
      anchor_gap = gap;
      anchor_t = t;
    } else if (gap < anchor_gap) {
      anchor_gap = std::min(anchor_gap, gap);
    }

    std::vector<double> w_next = w;
    bool ok;
    if (burst_left > 0) {
      ok = update_weights(w_next, cur.r, 2, opts.weight_floor);
      if (ok) {
        // Accelerated steps may only be kept if they preserve the monotone
        // weighted error; otherwise fall back to the plain update.
        const Iterate trial = lawson_step(table, w_next);
        if (trial.werr < cur.werr - 1e-13) {
          w_next = w;
          ok = update_weights(w_next, cur.r, 1, opts.weight_floor);
          burst_left = 0;
        } else {
          --burst_left;
        }
      }
    } else {
      ok = update_weights(w_next, cur.r, 1, opts.weight_floor);
    }

    if (!ok) {
      // Weight mass collapsed onto zero-residual points; restart uniformly.
      if (++restarts > 3) break;
      w_next.assign(n, 1.0 / static_cast<double>(n));
    }
    w = std::move(w_next);
  }

  // Cap hit: report the best iterate seen, flagged unconverged.
  out.alpha_star.alpha = best.alpha;
  out.residuals = best.r;
  out.delta = best.delta;
  out.lower_bound = std::min(best.werr, best.delta);
  out.lawson_weights = best_w;
  out.iterations = std::min(t, opts.max_iter);
  out.converged = false;
  return out;
}

double dual_lower_bound(const EvaluationTable& table,
                        std::span<const double> omega) {
  const std::size_t n = table.n();
  if (omega.size() != n)
    throw validation_error("dual_lower_bound: weight count mismatch");
  double s = 0.0;
  for (double x : omega) {
    if (!(x >= 0.0)) throw validation_error("dual_lower_bound: negative weight");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-8)
    throw validation_error("dual_lower_bound: weights must sum to 1");

  const Vec alpha = weighted_least_squares(table.Phi, table.F, omega);
  const Vec r = residuals_for(table, alpha);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += omega[j] * std::norm(r[j]);
  return std::sqrt(acc);
}

}  // namespace normax
