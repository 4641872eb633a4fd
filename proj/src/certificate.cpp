#include "normax/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace normax {

namespace {

double recomputed_delta(const Vec& residuals) {
  double d = 0.0;
  for (const Cx& r : residuals) d = std::max(d, std::abs(r));
  return d;
}

// Stacked real system whose exact solution is the orthogonality condition:
// rows 2i / 2i+1 carry Re / Im of r(mu_j) conj(Phi_{mu_j,i}); the last row is
// all ones (sum of weights).
DenseMatrix condition_matrix(const EvaluationTable& table, const Vec& residuals,
                             const std::vector<std::size_t>& support) {
  const std::size_t k = table.k(), a = support.size();
  DenseMatrix E(2 * k + 1, a);
  for (std::size_t j = 0; j < a; ++j) {
    const std::size_t g = support[j];
    for (std::size_t i = 0; i < k; ++i) {
      const Cx m = residuals[g] * std::conj(table.Phi(g, i));
      E(2 * i, j) = m.real();
      E(2 * i + 1, j) = m.imag();
    }
    E(2 * k, j) = 1.0;
  }
  return E;
}

double condition_residual_of(const EvaluationTable& table, const Vec& residuals,
                             const std::vector<std::size_t>& support,
                             const std::vector<double>& omega) {
  const std::size_t k = table.k();
  double worst = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    Cx acc{};
    for (std::size_t j = 0; j < support.size(); ++j)
      acc += omega[j] * residuals[support[j]] * std::conj(table.Phi(support[j], i));
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

void normalize_weights(std::vector<double>& omega) {
  double s = 0.0;
  for (double w : omega) s += w;
  if (s > 0.0 && s != 1.0)
    for (double& w : omega) w /= s;
}

}  // namespace

std::size_t caratheodory_bound(const EvaluationTable& table) {
  const std::size_t k = table.k();
  if (table.mode == Field::Real) {
    const double tol = default_point_tol(table.gamma.points);
    bool all_real = true;
    for (const Cx& z : table.gamma.points)
      if (std::abs(z.imag()) > tol) {
        all_real = false;
        break;
      }
    if (all_real) return k + 1;
  }
  return 2 * k + 1;
}

std::vector<std::size_t> extract_active_set(const MinimaxSolution& sol,
                                            double active_tol) {
  if (!all_finite(sol.residuals))
    throw validation_error("extract_active_set: non-finite residuals");
  const double delta = recomputed_delta(sol.residuals);
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < sol.residuals.size(); ++j)
    if (std::abs(sol.residuals[j]) >= delta * (1.0 - active_tol))
      active.push_back(j);
  return active;
}

std::vector<double> nonnegative_least_squares(const DenseMatrix& E,
                                              const Vec& e) {
  const std::size_t m = E.rows, a = E.cols;
  if (e.size() != m)
    throw validation_error("nonnegative_least_squares: dimension mismatch");
  const std::vector<double> ones(m, 1.0);

  // Unrestricted min-norm solve first.
  {
    const Vec x = weighted_least_squares(E, e, ones);
    bool ok = true;
    std::vector<double> out(a);
    for (std::size_t j = 0; j < a; ++j) {
      const double v = x[j].real();
      if (v < -1e-12) {
        ok = false;
        break;
      }
      out[j] = std::max(v, 0.0);
    }
    if (ok) return out;
  }

  // Lawson–Hanson active-set loop.
  std::vector<double> x(a, 0.0);
  std::vector<bool> passive(a, false);
  std::size_t n_passive = 0;

  auto ls_on_passive = [&](std::vector<double>& z) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < a; ++j)
      if (passive[j]) cols.push_back(j);
    DenseMatrix S(m, cols.size());
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < cols.size(); ++c) S(i, c) = E(i, cols[c]);
    const Vec zc = weighted_least_squares(S, e, ones);
    z.assign(a, 0.0);
    for (std::size_t c = 0; c < cols.size(); ++c) z[cols[c]] = zc[c].real();
  };

  double grad_scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) grad_scale += std::abs(e[i]);
  double enorm = 0.0;
  for (const Cx& v : E.a) enorm = std::max(enorm, std::abs(v));
  const double grad_tol = 1e-12 * std::max(1.0, enorm * std::max(1.0, grad_scale));

  const std::size_t outer_cap = 10 * (a + m) + 50;
  for (std::size_t outer = 0; outer < outer_cap; ++outer) {
    // Gradient of the fit at x: w = E^T (e - E x).
    Vec resid(m);
    for (std::size_t i = 0; i < m; ++i) {
      Cx acc = e[i];
      for (std::size_t j = 0; j < a; ++j) acc -= E(i, j) * x[j];
      resid[i] = acc;
    }
    double best_w = grad_tol;
    std::ptrdiff_t best_j = -1;
    for (std::size_t j = 0; j < a; ++j) {
      if (passive[j]) continue;
      double wj = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        wj += E(i, j).real() * resid[i].real();
      if (wj > best_w) {
        best_w = wj;
        best_j = static_cast<std::ptrdiff_t>(j);
      }
    }
    if (best_j < 0) break;
    passive[static_cast<std::size_t>(best_j)] = true;
    ++n_passive;

    for (std::size_t inner = 0; inner <= a; ++inner) {
      std::vector<double> z;
      ls_on_passive(z);
      double zmin = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < a; ++j)
        if (passive[j]) zmin = std::min(zmin, z[j]);
      if (zmin > 0.0) {
        x = z;
        break;
      }
      // Step toward z until the first passive coordinate hits zero.
      double theta = 1.0;
      for (std::size_t j = 0; j < a; ++j)
        if (passive[j] && z[j] <= 0.0 && x[j] != z[j])
          theta = std::min(theta, x[j] / (x[j] - z[j]));
      for (std::size_t j = 0; j < a; ++j)
        if (passive[j]) x[j] += theta * (z[j] - x[j]);
      for (std::size_t j = 0; j < a; ++j) {
        if (passive[j] && x[j] <= 1e-14) {
          x[j] = 0.0;
          passive[j] = false;
          --n_passive;
        }
      }
      if (n_passive == 0) break;
    }
  }
  return x;
}

Certificate recover_weights(const MinimaxSolution& sol,
                            const EvaluationTable& table,
                            const std::vector<std::size_t>& active,
                            double cond_tol) {
  const std::size_t n = table.n();
  if (active.empty()) throw validation_error("recover_weights: empty active set");
  for (std::size_t j : active)
    if (j >= n) throw validation_error("recover_weights: active index out of range");
  if (sol.residuals.size() != n)
    throw validation_error("recover_weights: solution/table size mismatch");

  const double delta = recomputed_delta(sol.residuals);

  Certificate cert;
  cert.mode = table.mode;
  cert.delta = delta;

  double fscale = 0.0;
  for (const Cx& f : table.F) fscale = std::max(fscale, std::abs(f));
  if (delta <= 1e-14 * std::max(1.0, fscale)) {
    // f is (numerically) in the span: any single extremal point certifies.
    cert.trivial = true;
    cert.support = {active.front()};
    cert.omega = {1.0};
    cert.ell = 1;
    cert.support_residuals = {sol.residuals[active.front()]};
    cert.condition_residual =
        condition_residual_of(table, sol.residuals, cert.support, cert.omega);
    return cert;
  }

  const DenseMatrix E = condition_matrix(table, sol.residuals, active);
  Vec target(E.rows, Cx{});
  target[E.rows - 1] = 1.0;

  std::vector<double> x = nonnegative_least_squares(E, target);
  double mass = std::accumulate(x.begin(), x.end(), 0.0);
  if (mass <= 1e-12)
    throw not_optimal_error(
        "recover_weights: orthogonality system admits no nonnegative weights",
        1.0);
  for (double& v : x) v /= mass;

  for (std::size_t j = 0; j < active.size(); ++j) {
    if (x[j] > 0.0) {
      cert.support.push_back(active[j]);
      cert.omega.push_back(x[j]);
      cert.support_residuals.push_back(sol.residuals[active[j]]);
    }
  }
  normalize_weights(cert.omega);
  cert.ell = cert.support.size();
  cert.condition_residual =
      condition_residual_of(table, sol.residuals, cert.support, cert.omega);

  if (cert.condition_residual > cond_tol * std::max(1.0, delta))
    throw not_optimal_error(
        "recover_weights: best nonnegative weights leave the orthogonality "
        "condition unsatisfied — the coefficients are not optimal",
        cert.condition_residual);
  return cert;
}

std::optional<PolishResult> polish_on_support(const MinimaxSolution& sol,
                                              const EvaluationTable& table) {
  const std::size_t n = table.n(), k = table.k();
  if (sol.residuals.size() != n || sol.alpha_star.alpha.size() != k)
    return std::nullopt;
  if (!all_finite(sol.residuals) || !all_finite(sol.alpha_star.alpha))
    return std::nullopt;
  const double delta0 = recomputed_delta(sol.residuals);
  double fscale = 0.0;
  for (const Cx& f : table.F) fscale = std::max(fscale, std::abs(f));
  if (delta0 <= 1e-14 * std::max(1.0, fscale)) return std::nullopt;

  const bool real_mode = table.mode == Field::Real;

  // Candidate support: a generous band below the max, since flat directions
  // of the max can depress genuinely extremal residuals by ~sqrt(gap).
  const double gap_rel = std::max(0.0, sol.delta - sol.lower_bound) /
                         std::max(1.0, sol.delta);
  const double band = std::min(0.2, std::max(1e-4, 40.0 * gap_rel));
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(sol.residuals[j]) >= (1.0 - band) * delta0)
      support.push_back(j);
  if (support.empty()) return std::nullopt;

  // Start the weights from the nonnegative orthogonality fit. Only when that
  // fit is already tight are its starved candidates safe to discard up front;
  // a sloppy fit may starve genuinely extremal points.
  std::vector<double> omega(support.size(),
                            1.0 / static_cast<double>(support.size()));
  {
    const DenseMatrix E = condition_matrix(table, sol.residuals, support);
    Vec target(E.rows, Cx{});
    target[E.rows - 1] = 1.0;
    std::vector<double> x = nonnegative_least_squares(E, target);
    const double mass = std::accumulate(x.begin(), x.end(), 0.0);
    if (mass > 1e-12) {
      for (double& v : x) v /= mass;
      double fit2 = 0.0;
      for (std::size_t i = 0; i < E.rows; ++i) {
        double acc = -target[i].real();
        for (std::size_t j = 0; j < x.size(); ++j) acc += E(i, j).real() * x[j];
        fit2 += acc * acc;
      }
      if (std::sqrt(fit2) <= 1e-6 * std::max(1.0, delta0)) {
        std::vector<std::size_t> s2;
        std::vector<double> o2;
        for (std::size_t j = 0; j < support.size(); ++j)
          if (x[j] >= 1e-9) {
            s2.push_back(support[j]);
            o2.push_back(x[j]);
          }
        if (!s2.empty()) {
          support = std::move(s2);
          omega = std::move(o2);
          normalize_weights(omega);
        } else {
          omega = std::move(x);
        }
      } else {
        omega = std::move(x);
      }
    }
  }

  Vec alpha = sol.alpha_star.alpha;
  double delta = delta0;
  double phimax = 0.0;
  for (const Cx& v : table.Phi.a) phimax = std::max(phimax, std::abs(v));
  // Row scales: orthogonality rows live at delta*|phi|, equal-modulus rows at
  // delta^2, the mass row at 1. Judging convergence on the scaled system keeps
  // the sharpening meaningful when delta is far from unit size.
  const double sG = std::max(delta0 * std::max(1.0, phimax), 1e-300);
  const double sH = std::max(delta0 * delta0, 1e-300);
  const double ftol = 1e-12;

  // Stationarity equations on a fixed support S: 2k orthogonality rows,
  // |S| equal-modulus rows, one unit-mass row — each divided by its scale.
  const auto evaluate = [&](const std::vector<std::size_t>& S, const Vec& a,
                            const std::vector<double>& om, double d,
                            std::vector<double>& F, Vec& r) {
    const std::size_t ell = S.size();
    r.assign(ell, Cx{});
    for (std::size_t j = 0; j < ell; ++j) {
      Cx acc = table.F[S[j]];
      for (std::size_t i = 0; i < k; ++i) acc -= a[i] * table.Phi(S[j], i);
      r[j] = acc;
    }
    F.assign(2 * k + ell + 1, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      Cx g{};
      for (std::size_t j = 0; j < ell; ++j)
        g += om[j] * r[j] * std::conj(table.Phi(S[j], i));
      F[2 * i] = g.real() / sG;
      F[2 * i + 1] = g.imag() / sG;
    }
    for (std::size_t j = 0; j < ell; ++j)
      F[2 * k + j] = (std::norm(r[j]) - d * d) / sH;
    double m = -1.0;
    for (double w : om) m += w;
    F[2 * k + ell] = m;
  };

  const auto max_abs_of = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  // One damped Gauss-Newton run on a fixed support; steps are minimum-norm
  // through the eigendecomposition of J^T J, so weight directions the system
  // does not determine (degenerate supports) stay put. Returns the final
  // max-norm of the stationarity equations.
  const auto gauss_newton = [&](const std::vector<std::size_t>& S, Vec& a,
                                std::vector<double>& om, double& d) -> double {
    const std::size_t ell = S.size();
    const std::size_t ab = real_mode ? k : 2 * k;  // alpha unknowns
    const std::size_t p = ab + ell + 1;
    const std::size_t m = 2 * k + ell + 1;

    std::vector<double> F;
    Vec r;
    evaluate(S, a, om, d, F, r);
    double fnorm = max_abs_of(F);

    for (int iter = 0; iter < 40 && fnorm > ftol; ++iter) {
      std::vector<double> J(m * p, 0.0);
      const auto at = [&](std::size_t row, std::size_t col) -> double& {
        return J[row * p + col];
      };
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t t = 0; t < k; ++t) {
          Cx c{};
          for (std::size_t j = 0; j < ell; ++j)
            c += om[j] * table.Phi(S[j], t) * std::conj(table.Phi(S[j], i));
          c /= sG;
          at(2 * i, t) = -c.real();
          at(2 * i + 1, t) = -c.imag();
          if (!real_mode) {
            at(2 * i, k + t) = c.imag();
            at(2 * i + 1, k + t) = -c.real();
          }
        }
        for (std::size_t j = 0; j < ell; ++j) {
          const Cx dmu = r[j] * std::conj(table.Phi(S[j], i)) / sG;
          at(2 * i, ab + j) = dmu.real();
          at(2 * i + 1, ab + j) = dmu.imag();
        }
      }
      for (std::size_t j = 0; j < ell; ++j) {
        for (std::size_t t = 0; t < k; ++t) {
          const Cx w = std::conj(r[j]) * table.Phi(S[j], t) / sH;
          at(2 * k + j, t) = -2.0 * w.real();
          if (!real_mode) at(2 * k + j, k + t) = 2.0 * w.imag();
        }
        at(2 * k + j, p - 1) = -2.0 * d / sH;
      }
      for (std::size_t j = 0; j < ell; ++j) at(2 * k + ell, ab + j) = 1.0;

      DenseMatrix A(p, p);
      std::vector<double> g(p, 0.0);
      for (std::size_t c1 = 0; c1 < p; ++c1) {
        for (std::size_t c2 = c1; c2 < p; ++c2) {
          double acc = 0.0;
          for (std::size_t row = 0; row < m; ++row)
            acc += J[row * p + c1] * J[row * p + c2];
          A(c1, c2) = acc;
          A(c2, c1) = acc;
        }
        double gg = 0.0;
        for (std::size_t row = 0; row < m; ++row)
          gg += J[row * p + c1] * F[row];
        g[c1] = gg;
      }
      EigResult eg;
      try {
        eg = hermitian_eig(A);
      } catch (const std::exception&) {
        break;
      }
      const double lmax = std::max(eg.lambdas.back(), 0.0);
      const double cut = std::max(lmax * 1e-14, 1e-300);
      std::vector<double> step(p, 0.0);
      for (std::size_t ev = 0; ev < p; ++ev) {
        const double lam = eg.lambdas[ev];
        if (lam <= cut) continue;
        double proj = 0.0;
        for (std::size_t c1 = 0; c1 < p; ++c1)
          proj += eg.Q(c1, ev).real() * g[c1];
        const double coef = -proj / lam;
        for (std::size_t c1 = 0; c1 < p; ++c1)
          step[c1] += coef * eg.Q(c1, ev).real();
      }

      bool moved = false;
      for (double tstep = 1.0; tstep >= 1.0 / 1024.0; tstep *= 0.5) {
        Vec a2 = a;
        std::vector<double> om2 = om;
        double d2 = d;
        for (std::size_t t = 0; t < k; ++t)
          a2[t] += real_mode ? Cx(tstep * step[t], 0.0)
                             : Cx(tstep * step[t], tstep * step[k + t]);
        for (std::size_t j = 0; j < ell; ++j) om2[j] += tstep * step[ab + j];
        d2 += tstep * step[p - 1];
        std::vector<double> F2;
        Vec r2;
        evaluate(S, a2, om2, d2, F2, r2);
        const double f2 = max_abs_of(F2);
        if (f2 < fnorm * (1.0 - 1e-4 * tstep) || f2 <= ftol) {
          a = std::move(a2);
          om = std::move(om2);
          d = std::abs(d2);
          F = std::move(F2);
          r = std::move(r2);
          fnorm = f2;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    return fnorm;
  };

  const std::size_t max_rounds = support.size() + 3;
  bool closed = false;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    const double fnorm = gauss_newton(support, alpha, omega, delta);
    const bool converged = fnorm <= ftol;

    // Candidates whose stationarity weight vanished are not extremal; shed
    // them (their equal-modulus equation with it) and re-solve.
    std::vector<std::size_t> s2;
    std::vector<double> o2;
    for (std::size_t j = 0; j < support.size(); ++j)
      if (omega[j] >= 1e-9) {
        s2.push_back(support[j]);
        o2.push_back(omega[j]);
      }
    if (s2.size() != support.size()) {
      if (s2.empty()) return std::nullopt;
      support = std::move(s2);
      omega = std::move(o2);
      normalize_weights(omega);
      continue;
    }
    if (converged) {
      closed = true;
      break;
    }
    // Nothing identified itself as spurious yet the system will not close:
    // shed the lightest point and retry.
    if (support.size() <= 1) return std::nullopt;
    std::size_t lightest = 0;
    for (std::size_t j = 1; j < support.size(); ++j)
      if (omega[j] < omega[lightest]) lightest = j;
    support.erase(support.begin() + static_cast<std::ptrdiff_t>(lightest));
    omega.erase(omega.begin() + static_cast<std::ptrdiff_t>(lightest));
    normalize_weights(omega);
  }
  if (!closed) return std::nullopt;

  double mass = 0.0, wmin = std::numeric_limits<double>::infinity();
  for (double w : omega) {
    mass += w;
    wmin = std::min(wmin, w);
  }
  if (wmin < 0.0 || std::abs(mass - 1.0) > 1e-6) return std::nullopt;
  normalize_weights(omega);

  const Vec full = residuals_for(table, alpha);
  if (!all_finite(full)) return std::nullopt;
  const double dfull = recomputed_delta(full);
  // The equalized support must carry the global max, and sharpening must
  // never worsen the value it started from.
  if (dfull > delta * (1.0 + 1e-9) + 1e-15) return std::nullopt;
  if (dfull > delta0 * (1.0 + 1e-9)) return std::nullopt;

  PolishResult out;
  out.sol = sol;
  out.sol.alpha_star.alpha = std::move(alpha);
  out.sol.residuals = full;
  out.sol.delta = dfull;
  out.support = std::move(support);
  out.omega = std::move(omega);
  return out;
}

Certificate caratheodory_prune(const Certificate& cert,
                               const EvaluationTable& table) {
  const std::size_t bound = caratheodory_bound(table);
  Certificate out = cert;
  out.pruned = true;
  if (cert.trivial || cert.ell <= bound) return out;

  const std::size_t max_passes = cert.ell;
  for (std::size_t pass = 0; pass < max_passes && out.ell > bound; ++pass) {
    const std::size_t l = out.ell;
    const DenseMatrix M =
        condition_matrix(table, [&] {
          // condition_matrix reads residuals by Gamma index; rebuild a sparse
          // view from the certificate's own support residuals.
          Vec r(table.n(), Cx{});
          for (std::size_t j = 0; j < l; ++j)
            r[out.support[j]] = out.support_residuals[j];
          return r;
        }(), out.support);

    // Null direction of M restricted to the support, via the Gram matrix.
    DenseMatrix G(l, l);
    for (std::size_t p = 0; p < l; ++p)
      for (std::size_t q = 0; q < l; ++q) {
        Cx acc{};
        for (std::size_t i = 0; i < M.rows; ++i)
          acc += std::conj(M(i, p)) * M(i, q);
        G(p, q) = acc;
      }
    const EigResult eg = hermitian_eig(G, 1e-8);
    const double smin = std::sqrt(std::max(eg.lambdas.front(), 0.0));
    const double smax = std::sqrt(std::max(eg.lambdas.back(), 0.0));
    if (smin > 1e-10 * std::max(smax, 1e-300)) {
      Certificate bail = cert;
      bail.prune_warning = true;
      return bail;
    }
    std::vector<double> nu(l);
    double numax = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
      nu[j] = eg.Q(j, 0).real();
      numax = std::max(numax, std::abs(nu[j]));
    }
    if (numax == 0.0) {
      Certificate bail = cert;
      bail.prune_warning = true;
      return bail;
    }
    for (double& v : nu) v /= numax;

    // Orient so the heaviest point keeps its weight (component <= 0 there),
    // then walk omega - t*nu until the first weights vanish.
    std::size_t heavy = 0;
    for (std::size_t j = 1; j < l; ++j)
      if (out.omega[j] > out.omega[heavy]) heavy = j;
    if (nu[heavy] > 0.0)
      for (double& v : nu) v = -v;

    double tstar = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < l; ++j)
      if (nu[j] > 1e-12) tstar = std::min(tstar, out.omega[j] / nu[j]);
    if (!std::isfinite(tstar)) {
      Certificate bail = cert;
      bail.prune_warning = true;
      return bail;
    }

    Certificate next = out;
    next.support.clear();
    next.omega.clear();
    next.support_residuals.clear();
    for (std::size_t j = 0; j < l; ++j) {
      const bool drops =
          nu[j] > 1e-12 && out.omega[j] / nu[j] <= tstar * (1.0 + 1e-10);
      if (drops) continue;
      next.support.push_back(out.support[j]);
      next.omega.push_back(std::max(out.omega[j] - tstar * nu[j], 0.0));
      next.support_residuals.push_back(out.support_residuals[j]);
    }
    if (next.support.empty() || next.support.size() >= l) {
      Certificate bail = cert;
      bail.prune_warning = true;
      return bail;
    }
    normalize_weights(next.omega);
    next.ell = next.support.size();
    out = next;
  }

  {
    Vec r(table.n(), Cx{});
    for (std::size_t j = 0; j < out.ell; ++j)
      r[out.support[j]] = out.support_residuals[j];
    out.condition_residual =
        condition_residual_of(table, r, out.support, out.omega);
  }
  return out;
}

Report verify_certificate(const Certificate& cert, const MinimaxSolution& sol,
                          const EvaluationTable& table, double tol) {
  Report rep;
  const std::size_t n = table.n();
  const double delta = recomputed_delta(sol.residuals);

  bool shape_ok = cert.support.size() == cert.ell &&
                  cert.omega.size() == cert.ell && cert.ell >= 1;
  std::vector<std::size_t> sorted = cert.support;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 0; shape_ok && j < sorted.size(); ++j) {
    if (sorted[j] >= n) shape_ok = false;
    if (j + 1 < sorted.size() && sorted[j] == sorted[j + 1]) shape_ok = false;
  }
  rep.add("support_indices_distinct", shape_ok, shape_ok ? 0.0 : 1.0);
  if (!shape_ok) return rep;

  double activity_dev = 0.0;
  for (std::size_t j : cert.support)
    activity_dev = std::max(activity_dev, delta - std::abs(sol.residuals[j]));
  rep.add("support_points_active", activity_dev <= tol * std::max(1.0, delta),
          activity_dev);

  double wmin = std::numeric_limits<double>::infinity(), wsum = 0.0;
  for (double w : cert.omega) {
    wmin = std::min(wmin, w);
    wsum += w;
  }
  rep.add("weights_positive", wmin > 0.0, wmin > 0.0 ? 0.0 : -wmin);
  rep.add("weights_sum_to_one", std::abs(wsum - 1.0) <= 1e-12,
          std::abs(wsum - 1.0));

  const double cond =
      condition_residual_of(table, sol.residuals, cert.support, cert.omega);
  rep.add("orthogonality_condition", cond <= tol * std::max(1.0, delta), cond);

  double rdev = 0.0;
  for (std::size_t j = 0; j < cert.ell; ++j)
    rdev = std::max(rdev, std::abs(cert.support_residuals[j] -
                                   sol.residuals[cert.support[j]]));
  rep.add("stored_residuals_match", rdev <= 1e-10 * std::max(1.0, delta), rdev);

  const std::size_t bound = caratheodory_bound(table);
  const double excess =
      cert.ell > bound ? static_cast<double>(cert.ell - bound) : 0.0;
  rep.add("support_size_bound", excess == 0.0, excess,
          /*info=*/!cert.pruned);
  return rep;
}

}  // namespace normax
