#include "normax/matrix_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normax/kernels.hpp"

namespace normax {

std::vector<std::size_t> eigen_to_gamma_row(const PointSet& gamma) {
  std::vector<std::size_t> row(gamma.original_size(),
                               std::numeric_limits<std::size_t>::max());
  for (std::size_t g = 0; g < gamma.multiplicity_map.size(); ++g)
    for (std::size_t j : gamma.multiplicity_map[g]) {
      if (j >= row.size() || row[j] != std::numeric_limits<std::size_t>::max())
        throw validation_error("eigen_to_gamma_row: multiplicity map is not a "
                               "partition of the index range");
      row[j] = g;
    }
  return row;
}

Report validate_decomposition(const SpectralDecomposition& decomp,
                              const DenseMatrix* A, double tol) {
  Report rep;
  const std::size_t n = decomp.n();
  const bool shape_ok = decomp.Q.rows == n && decomp.Q.cols == n && n >= 1;
  rep.add("shape", shape_ok, shape_ok ? 0.0 : 1.0);
  if (!shape_ok) return rep;

  DenseMatrix G = matmul(adjoint(decomp.Q), decomp.Q);
  for (std::size_t i = 0; i < n; ++i) G(i, i) -= 1.0;
  const double unit_dev = frob_norm(G);
  rep.add("unitarity", unit_dev <= 1e-10 * static_cast<double>(n), unit_dev);

  if (A != nullptr) {
    if (A->rows != n || A->cols != n) {
      rep.add("reconstruction", false, 1.0);
    } else {
      const DenseMatrix R = apply_function_table(decomp, decomp.lambdas);
      DenseMatrix D = *A;
      for (std::size_t i = 0; i < D.a.size(); ++i) D.a[i] -= R.a[i];
      const double anorm = std::max(frob_norm(*A), 1e-300);
      rep.add("reconstruction", frob_norm(D) <= tol * anorm, frob_norm(D));

      const DenseMatrix AAh = matmul(*A, adjoint(*A));
      const DenseMatrix AhA = matmul(adjoint(*A), *A);
      DenseMatrix C = AAh;
      for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] -= AhA.a[i];
      rep.add("normality", frob_norm(C) <= tol * anorm * anorm, frob_norm(C));
    }
  }

  if (decomp.mode == Field::Real) {
    const bool has_pairing = decomp.pairing.size() == n;
    rep.add("pairing_present", has_pairing, has_pairing ? 0.0 : 1.0);
    if (has_pairing) {
      bool ok = true;
      double dev = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t p = decomp.pairing[j];
        if (p >= n || decomp.pairing[p] != j) {
          ok = false;
          break;
        }
        dev = std::max(dev, std::abs(decomp.lambdas[p] -
                                     std::conj(decomp.lambdas[j])));
        for (std::size_t i = 0; i < n; ++i)
          dev = std::max(dev, std::abs(decomp.Q(i, p) -
                                       std::conj(decomp.Q(i, j))));
      }
      rep.add("pairing_involution", ok, ok ? 0.0 : 1.0);
      if (ok) rep.add("pairing_conjugation", dev <= 1e-10, dev);
    }
    const DenseMatrix R = apply_function_table(decomp, decomp.lambdas);
    double im_dev = 0.0;
    for (const Cx& v : R.a) im_dev = std::max(im_dev, std::abs(v.imag()));
    rep.add("real_reconstruction", im_dev <= 1e-10, im_dev);
  }
  return rep;
}

DenseMatrix apply_function_table(const SpectralDecomposition& decomp,
                                 const Vec& g_values) {
  const std::size_t n = decomp.n();
  if (g_values.size() != n)
    throw validation_error("apply_function_table: value count mismatch");
  if (decomp.Q.rows != n || decomp.Q.cols != n)
    throw validation_error("apply_function_table: decomposition shape");
  DenseMatrix B(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) B(i, j) = decomp.Q(i, j) * g_values[j];
  return matmul(B, adjoint(decomp.Q));
}

std::optional<std::vector<std::size_t>> derive_real_pairing(
    const DenseMatrix& Q, const Vec& lambdas, double tol) {
  const std::size_t n = lambdas.size();
  const double ltol = tol * (1.0 + [&] {
    double m = 0.0;
    for (const Cx& z : lambdas) m = std::max(m, std::abs(z));
    return m;
  }());
  std::vector<std::size_t> pi(n, n);
  auto col_dev = [&](std::size_t a, std::size_t b) {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      d = std::max(d, std::abs(Q(i, a) - std::conj(Q(i, b))));
    return d;
  };
  for (std::size_t j = 0; j < n; ++j) {
    if (pi[j] != n) continue;
    const Cx target = std::conj(lambdas[j]);
    bool found = false;
    for (std::size_t t = j; t < n && !found; ++t) {
      if (pi[t] != n && t != j) continue;
      if (std::abs(lambdas[t] - target) > ltol) continue;
      if (col_dev(t, j) > tol) continue;
      pi[j] = t;
      pi[t] = j;
      found = true;
    }
    if (!found) return std::nullopt;
  }
  return pi;
}

namespace {

struct ExpandedTable {
  std::vector<std::size_t> row;  // eigen index -> Gamma row
};

ExpandedTable expansion_for(const SpectralDecomposition& decomp,
                            const EvaluationTable& table) {
  ExpandedTable ex;
  ex.row = eigen_to_gamma_row(table.gamma);
  if (ex.row.size() != decomp.n())
    throw validation_error(
        "table/decomposition mismatch: multiplicity map covers a different "
        "index range than the spectrum");
  double scale = 0.0;
  for (const Cx& z : table.gamma.points) scale = std::max(scale, std::abs(z));
  const double tol = 1e-6 * (1.0 + scale);
  for (std::size_t j = 0; j < decomp.n(); ++j)
    if (std::abs(decomp.lambdas[j] - table.gamma.points[ex.row[j]]) > tol)
      throw validation_error(
          "table/decomposition mismatch: eigenvalue differs from its mapped "
          "point");
  return ex;
}

}  // namespace

VectorApprox best_vector_approx(const SpectralDecomposition& decomp,
                                const EvaluationTable& table, const Vec& v) {
  const std::size_t N = decomp.n(), k = table.k();
  if (v.size() != N) throw validation_error("best_vector_approx: vector length");
  const double nv = norm2(v);
  if (!(nv > 0.0)) throw validation_error("best_vector_approx: zero vector");
  const ExpandedTable ex = expansion_for(decomp, table);

  Vec w = matvec(adjoint(decomp.Q), v);
  std::vector<double> wt(N);
  for (std::size_t j = 0; j < N; ++j) {
    w[j] /= nv;
    wt[j] = std::norm(w[j]);
  }

  VectorApprox out;
  if (table.mode == Field::Complex) {
    DenseMatrix Phi(N, k);
    Vec F(N);
    for (std::size_t j = 0; j < N; ++j) {
      const std::size_t g = ex.row[j];
      F[j] = table.F[g];
      for (std::size_t i = 0; i < k; ++i) Phi(j, i) = table.Phi(g, i);
    }
    out.alpha.alpha = weighted_least_squares(Phi, F, wt);
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      Cx r = F[j];
      for (std::size_t i = 0; i < k; ++i) r -= Phi(j, i) * out.alpha.alpha[i];
      acc += wt[j] * std::norm(r);
    }
    out.value = std::sqrt(acc);
  } else {
    // Real coefficients: stack real and imaginary parts into real rows so the
    // least-squares solve stays inside real arithmetic.
    DenseMatrix Phi(2 * N, k);
    Vec F(2 * N);
    std::vector<double> wt2(2 * N);
    for (std::size_t j = 0; j < N; ++j) {
      const std::size_t g = ex.row[j];
      F[2 * j] = table.F[g].real();
      F[2 * j + 1] = table.F[g].imag();
      wt2[2 * j] = wt[j];
      wt2[2 * j + 1] = wt[j];
      for (std::size_t i = 0; i < k; ++i) {
        Phi(2 * j, i) = table.Phi(g, i).real();
        Phi(2 * j + 1, i) = table.Phi(g, i).imag();
      }
    }
    Vec a = weighted_least_squares(Phi, F, wt2);
    for (Cx& c : a) c = Cx(c.real(), 0.0);
    out.alpha.alpha = a;
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const std::size_t g = ex.row[j];
      Cx r = table.F[g];
      for (std::size_t i = 0; i < k; ++i) r -= table.Phi(g, i) * a[i];
      acc += wt[j] * std::norm(r);
    }
    out.value = std::sqrt(acc);
  }
  return out;
}

double minmax_matrix_value(const SpectralDecomposition& decomp,
                           const EvaluationTable& table,
                           const SolveOptions& opts) {
  (void)expansion_for(decomp, table);  // spectrum/table consistency gate
  const MinimaxSolution sol = solve_minimax(table, opts);
  if (!sol.converged)
    throw convergence_error("minmax_matrix_value: minimax solve did not reach "
                            "the requested gap",
                            sol.delta - sol.lower_bound);
  return sol.delta;
}

SampleResult sample_maxmin(const SpectralDecomposition& decomp,
                           const EvaluationTable& table, std::size_t trials,
                           std::uint64_t seed, const Vec* include) {
  if (trials < 1) throw validation_error("sample_maxmin: trials must be >= 1");
  const std::size_t N = decomp.n();
  const bool real_only = table.mode == Field::Real;

  std::vector<double> values(trials);
  const std::ptrdiff_t T = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(static) if (trials >= 8)
  for (std::ptrdiff_t t = 0; t < T; ++t) {
    const Vec v = random_unit_vector(
        N, mix_seed(seed, static_cast<std::uint64_t>(t)), real_only);
    values[static_cast<std::size_t>(t)] = best_vector_approx(decomp, table, v).value;
  }

  std::size_t best_t = 0;
  for (std::size_t t = 1; t < trials; ++t)
    if (values[t] > values[best_t]) best_t = t;

  SampleResult out;
  out.max_value = values[best_t];
  out.argmax = random_unit_vector(N, mix_seed(seed, best_t), real_only);

  // Local polish of the best sample: ascent on the squared objective with the
  // coefficients held at their per-step optimum; in real mode the gradient is
  // projected back onto real vectors.
  {
    Vec v = out.argmax;
    double val = out.max_value;
    const ExpandedTable ex = expansion_for(decomp, table);
    double step = 1.0;
    for (int it = 0; it < 100 && step > 1e-12; ++it) {
      const VectorApprox cur = best_vector_approx(decomp, table, v);
      val = cur.value;
      Vec w = matvec(adjoint(decomp.Q), v);
      for (std::size_t j = 0; j < N; ++j) {
        const std::size_t g = ex.row[j];
        Cx r = table.F[g];
        for (std::size_t i = 0; i < table.k(); ++i)
          r -= table.Phi(g, i) * cur.alpha.alpha[i];
        w[j] *= std::norm(r);
      }
      Vec grad = matvec(decomp.Q, w);
      if (real_only)
        for (Cx& giv : grad) giv = Cx(giv.real(), 0.0);

      Vec cand(N);
      for (std::size_t j = 0; j < N; ++j) cand[j] = v[j] + step * grad[j];
      const double cn = norm2(cand);
      if (!(cn > 0.0)) {
        step *= 0.5;
        continue;
      }
      for (Cx& c : cand) c /= cn;
      const double cval = best_vector_approx(decomp, table, cand).value;
      if (cval > val) {
        v = std::move(cand);
        val = cval;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    if (val > out.max_value) {
      out.max_value = val;
      out.argmax = v;
    }
  }

  if (include != nullptr) {
    const double nv = norm2(*include);
    if (nv > 0.0) {
      Vec vi = *include;
      for (Cx& c : vi) c /= nv;
      const double ival = best_vector_approx(decomp, table, vi).value;
      if (ival > out.max_value) {
        out.max_value = ival;
        out.argmax = std::move(vi);
      }
    }
  }
  return out;
}

CommutingProblem build_commuting_problem(const CommutingFamily& family) {
  const std::size_t n = family.U.rows;
  if (family.U.cols != n || n == 0)
    throw validation_error("commuting family: U must be square and nonempty");
  if (family.diagonals.size() < 2)
    throw validation_error("commuting family: need at least A_0 and A_1");
  for (const Vec& d : family.diagonals)
    if (d.size() != n || !all_finite(d))
      throw validation_error("commuting family: bad diagonal");

  DenseMatrix G = matmul(adjoint(family.U), family.U);
  for (std::size_t i = 0; i < n; ++i) G(i, i) -= 1.0;
  if (frob_norm(G) > 1e-10 * static_cast<double>(n))
    throw validation_error("commuting family: U is not unitary");

  if (!family.matrices.empty()) {
    if (family.matrices.size() != family.diagonals.size())
      throw validation_error("commuting family: matrix/diagonal count mismatch");
    for (const DenseMatrix& A : family.matrices)
      if (A.rows != n || A.cols != n)
        throw validation_error("commuting family: matrix shape");
    for (std::size_t i = 0; i < family.matrices.size(); ++i) {
      const DenseMatrix& Ai = family.matrices[i];
      const double ni = std::max(frob_norm(Ai), 1e-300);
      for (std::size_t j = i + 1; j < family.matrices.size(); ++j) {
        const DenseMatrix& Aj = family.matrices[j];
        DenseMatrix C = matmul(Ai, Aj);
        const DenseMatrix D = matmul(Aj, Ai);
        for (std::size_t t = 0; t < C.a.size(); ++t) C.a[t] -= D.a[t];
        if (frob_norm(C) > 1e-8 * ni * std::max(frob_norm(Aj), 1e-300))
          throw validation_error("commuting family: commutation violation");
      }
      DenseMatrix T = matmul(adjoint(family.U), matmul(Ai, family.U));
      for (std::size_t t = 0; t < n; ++t) T(t, t) -= family.diagonals[i][t];
      if (frob_norm(T) > 1e-8 * ni)
        throw validation_error(
            "commuting family: declared diagonal does not match U^H A U");
    }
  }

  // Merge indices with identical diagonal tuples; label survivors 1..m.
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t j = 0; j < n; ++j) {
    bool placed = false;
    for (auto& cls : classes) {
      const std::size_t r = cls.front();
      bool same = true;
      for (const Vec& d : family.diagonals)
        if (d[j] != d[r]) {
          same = false;
          break;
        }
      if (same) {
        cls.push_back(j);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({j});
  }

  CommutingProblem out;
  const std::size_t m = classes.size();
  const std::size_t k = family.diagonals.size() - 1;
  out.gamma.points.resize(m);
  out.gamma.multiplicity_map = classes;
  out.table.F.resize(m);
  out.table.Phi = DenseMatrix(m, k);
  out.table.mode = Field::Complex;
  for (std::size_t c = 0; c < m; ++c) {
    out.gamma.points[c] = Cx(static_cast<double>(c + 1), 0.0);
    const std::size_t r = classes[c].front();
    out.table.F[c] = family.diagonals[0][r];
    for (std::size_t i = 0; i < k; ++i)
      out.table.Phi(c, i) = family.diagonals[i + 1][r];
  }
  out.table.gamma = out.gamma;

  out.decomp.Q = family.U;
  out.decomp.mode = Field::Complex;
  out.decomp.lambdas.resize(n);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t j : classes[c]) out.decomp.lambdas[j] = out.gamma.points[c];
  return out;
}

}  // namespace normax
