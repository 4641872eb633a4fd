#include "normax/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace normax {

double default_point_tol(const Vec& points) {
  double mx = 0.0;
  for (const Cx& z : points) mx = std::max(mx, std::abs(z));
  return 1e-10 * (1.0 + mx);
}

PointSet from_spectrum(const Vec& eigenvalues, double dedupe_tol) {
  if (eigenvalues.empty())
    throw validation_error("from_spectrum: empty eigenvalue list");
  if (!all_finite(eigenvalues))
    throw validation_error("from_spectrum: non-finite eigenvalue");
  const double tol =
      dedupe_tol >= 0.0 ? dedupe_tol : default_point_tol(eigenvalues);

  std::vector<std::size_t> order(eigenvalues.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Cx &x = eigenvalues[a], &y = eigenvalues[b];
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });

  Vec reps;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t idx : order) {
    const Cx z = eigenvalues[idx];
    std::size_t c = reps.size();
    for (std::size_t t = 0; t < reps.size(); ++t) {
      if (std::abs(z - reps[t]) <= tol) {
        c = t;
        break;
      }
    }
    if (c == reps.size()) {
      reps.push_back(z);
      members.emplace_back();
    }
    members[c].push_back(idx);
  }

  // Order clusters by first appearance in the original input and keep each
  // member list ascending, so duplicate-free input passes through unchanged.
  for (auto& m : members) std::sort(m.begin(), m.end());
  std::vector<std::size_t> cluster_order(reps.size());
  std::iota(cluster_order.begin(), cluster_order.end(), std::size_t{0});
  std::sort(cluster_order.begin(), cluster_order.end(),
            [&](std::size_t a, std::size_t b) {
              return members[a].front() < members[b].front();
            });

  PointSet out;
  for (std::size_t c : cluster_order) {
    out.points.push_back(reps[c]);
    out.multiplicity_map.push_back(std::move(members[c]));
  }
  return out;
}

BasisKind BasisKind::gmres(std::size_t k) {
  BasisKind b;
  b.tag = Tag::gmres;
  b.k = k;
  return b;
}

BasisKind BasisKind::chebyshev(std::size_t k) {
  BasisKind b;
  b.tag = Tag::chebyshev;
  b.k = k;
  return b;
}

BasisKind BasisKind::custom(Vec F, DenseMatrix Phi) {
  BasisKind b;
  b.tag = Tag::custom;
  b.k = Phi.cols;
  b.F = std::move(F);
  b.Phi = std::move(Phi);
  return b;
}

EvaluationTable build_basis_problem(const PointSet& gamma, const BasisKind& kind,
                                    Field mode) {
  const std::size_t n = gamma.size();
  if (n == 0) throw validation_error("build_basis_problem: empty point set");
  if (kind.k == 0) throw validation_error("build_basis_problem: k must be >= 1");

  EvaluationTable t;
  t.gamma = gamma;
  t.mode = mode;
  switch (kind.tag) {
    case BasisKind::Tag::gmres: {
      t.F.assign(n, Cx(1.0, 0.0));
      t.Phi = DenseMatrix(n, kind.k);
      for (std::size_t j = 0; j < n; ++j) {
        Cx p = 1.0;
        for (std::size_t i = 0; i < kind.k; ++i) {
          p *= gamma.points[j];
          t.Phi(j, i) = p;
        }
      }
      break;
    }
    case BasisKind::Tag::chebyshev: {
      t.F.resize(n);
      t.Phi = DenseMatrix(n, kind.k);
      for (std::size_t j = 0; j < n; ++j) {
        Cx p = 1.0;
        for (std::size_t i = 0; i < kind.k; ++i) {
          t.Phi(j, i) = p;
          p *= gamma.points[j];
        }
        t.F[j] = p;  // after k multiplies, p = z^k
      }
      break;
    }
    case BasisKind::Tag::custom: {
      if (kind.F.size() != n || kind.Phi.rows != n)
        throw validation_error("build_basis_problem: custom table row count");
      if (kind.Phi.cols == 0)
        throw validation_error("build_basis_problem: custom table needs k >= 1");
      if (!all_finite(kind.F) || !all_finite(kind.Phi))
        throw validation_error("build_basis_problem: non-finite custom table");
      t.F = kind.F;
      t.Phi = kind.Phi;
      break;
    }
  }

  if (mode == Field::Real) {
    const SymmetryReport sr = validate_conjugate_symmetry(t);
    if (!sr.report.pass())
      throw validation_error(
          "build_basis_problem: real mode requires conjugate symmetry; first "
          "failing check: " +
          [&] {
            for (const CheckItem& c : sr.report.items)
              if (!c.pass) return c.name;
            return std::string("unknown");
          }());
  }
  return t;
}

SymmetryReport validate_conjugate_symmetry(const EvaluationTable& table,
                                           double pair_tol) {
  const std::size_t n = table.n(), k = table.k();
  const double tol =
      pair_tol >= 0.0 ? pair_tol : default_point_tol(table.gamma.points);

  SymmetryReport out;
  out.conj_index.assign(n, -1);

  double worst_pair = 0.0;
  bool closed = true;
  for (std::size_t j = 0; j < n; ++j) {
    const Cx target = std::conj(table.gamma.points[j]);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      const double d = std::abs(table.gamma.points[t] - target);
      if (d < best_d) {
        best_d = d;
        best = t;
      }
    }
    if (best_d <= tol) {
      out.conj_index[j] = static_cast<std::ptrdiff_t>(best);
    } else {
      closed = false;
    }
    worst_pair = std::max(worst_pair, best_d);
  }
  out.report.add("gamma_conjugate_closed", closed, closed ? worst_pair : worst_pair);

  double worst_f = 0.0, worst_phi = 0.0;
  bool f_ok = true, phi_ok = true;
  for (std::size_t j = 0; j < n; ++j) {
    if (out.conj_index[j] < 0) continue;
    const std::size_t jc = static_cast<std::size_t>(out.conj_index[j]);
    const double df = std::abs(std::conj(table.F[j]) - table.F[jc]);
    worst_f = std::max(worst_f, df);
    if (df > tol) f_ok = false;
    for (std::size_t i = 0; i < k; ++i) {
      const double dp = std::abs(std::conj(table.Phi(j, i)) - table.Phi(jc, i));
      worst_phi = std::max(worst_phi, dp);
      if (dp > tol) phi_ok = false;
    }
  }
  out.report.add("f_conjugation_identity", f_ok && closed, worst_f);
  out.report.add("phi_conjugation_identity", phi_ok && closed, worst_phi);
  return out;
}

}  // namespace normax
