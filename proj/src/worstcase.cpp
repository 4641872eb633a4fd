#include "normax/worstcase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normax/kernels.hpp"

namespace normax {

namespace {

// First original eigenvalue index of a Gamma point, with a consistency check
// against the decomposition's spectrum.
std::size_t anchor_index(const PointSet& gamma, std::size_t g,
                         const SpectralDecomposition& decomp) {
  if (g >= gamma.size() || gamma.multiplicity_map[g].empty())
    throw validation_error("worst-case vector: support index out of range");
  const std::size_t j0 = gamma.multiplicity_map[g].front();
  if (j0 >= decomp.n())
    throw validation_error("worst-case vector: multiplicity map exceeds the "
                           "decomposition size");
  const double tol = 1e-8 * (1.0 + std::abs(gamma.points[g]));
  if (std::abs(decomp.lambdas[j0] - gamma.points[g]) > tol)
    throw validation_error("worst-case vector: certificate and decomposition "
                           "disagree on an eigenvalue");
  return j0;
}

double attained_from(const std::vector<double>& w, const Vec& r) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::norm(r[i]);
  return std::sqrt(acc);
}

}  // namespace

WorstCaseVector complex_worst_vector(const Certificate& cert,
                                     const SpectralDecomposition& decomp,
                                     const PointSet& gamma) {
  const std::size_t N = decomp.n();
  if (gamma.original_size() != N)
    throw validation_error("complex_worst_vector: point set covers a "
                           "different index range than the spectrum");
  WorstCaseVector out;
  out.xi.assign(N, Cx{});
  for (std::size_t s = 0; s < cert.ell; ++s) {
    const std::size_t j0 = anchor_index(gamma, cert.support[s], decomp);
    out.xi[j0] = std::sqrt(cert.omega[s]);
  }
  out.v_star = matvec(decomp.Q, out.xi);
  out.attained = attained_from(cert.omega, cert.support_residuals);
  return out;
}

Coefficients realize_polynomial(const Coefficients& alpha,
                                const EvaluationTable& table) {
  const SymmetryReport sr = validate_conjugate_symmetry(table);
  if (!sr.report.pass())
    throw validation_error(
        "realize_polynomial: table is not conjugate-symmetric");
  Coefficients out;
  out.alpha.reserve(alpha.alpha.size());
  for (const Cx& a : alpha.alpha) out.alpha.push_back(Cx(a.real(), 0.0));
  return out;
}

SymmetrizedCertificate symmetrize_certificate(const Certificate& cert,
                                              const PointSet& gamma,
                                              double pair_tol) {
  const double tol =
      pair_tol >= 0.0 ? pair_tol : default_point_tol(gamma.points);

  // Conjugate partner of each support point inside Gamma.
  auto partner_of = [&](std::size_t g) -> std::size_t {
    const Cx target = std::conj(gamma.points[g]);
    std::size_t best = gamma.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < gamma.size(); ++t) {
      const double d = std::abs(gamma.points[t] - target);
      if (d < best_d) {
        best_d = d;
        best = t;
      }
    }
    if (best_d > tol)
      throw validation_error("symmetrize_certificate: conjugate of a support "
                             "point is missing from Gamma");
    return best;
  };

  SymmetrizedCertificate out;
  out.delta = cert.delta;

  std::vector<std::size_t> gamma_pos;  // Gamma index of each accepted theta
  auto slot_for = [&](std::size_t g) -> std::size_t {
    for (std::size_t i = 0; i < gamma_pos.size(); ++i)
      if (gamma_pos[i] == g) return i;
    gamma_pos.push_back(g);
    out.theta.push_back(gamma.points[g]);
    out.omega_tilde.push_back(0.0);
    out.theta_residuals.push_back(Cx{});
    return gamma_pos.size() - 1;
  };

  for (std::size_t s = 0; s < cert.ell; ++s) {
    const std::size_t g = cert.support[s];
    const Cx mu = gamma.points[g];
    const Cx r = cert.support_residuals[s];
    if (std::abs(mu.imag()) <= tol) {
      const std::size_t i = slot_for(g);
      out.omega_tilde[i] += cert.omega[s];
      out.theta_residuals[i] = r;
    } else {
      const std::size_t gp = partner_of(g);
      const std::size_t i = slot_for(g);
      out.omega_tilde[i] += 0.5 * cert.omega[s];
      out.theta_residuals[i] = r;
      const std::size_t ip = slot_for(gp);
      out.omega_tilde[ip] += 0.5 * cert.omega[s];
      // If the conjugate sits in the support its own pass stores the exact
      // residual; otherwise the conjugation identity for the realized
      // solution supplies it.
      bool in_support = false;
      for (std::size_t t = 0; t < cert.ell; ++t)
        if (cert.support[t] == gp) {
          in_support = true;
          break;
        }
      if (!in_support) out.theta_residuals[ip] = std::conj(r);
    }
  }

  out.gamma_index = gamma_pos;
  const std::size_t m = out.theta.size();
  out.pairing.assign(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(out.theta[i].imag()) <= tol) {
      out.pairing[i] = i;
      continue;
    }
    const std::size_t gp = partner_of(gamma_pos[i]);
    for (std::size_t t = 0; t < m; ++t)
      if (gamma_pos[t] == gp) {
        out.pairing[i] = t;
        break;
      }
    if (out.pairing[i] == m)
      throw validation_error(
          "symmetrize_certificate: internal pairing construction failed");
  }
  return out;
}

WorstCaseVector real_worst_vector(const SymmetrizedCertificate& symcert,
                                  const SpectralDecomposition& decomp,
                                  const PointSet& gamma) {
  const std::size_t N = decomp.n();
  if (gamma.original_size() != N)
    throw validation_error("real_worst_vector: point set covers a different "
                           "index range than the spectrum");

  std::vector<std::size_t> pi = decomp.pairing;
  if (pi.size() != N) {
    const auto derived = derive_real_pairing(decomp.Q, decomp.lambdas);
    if (!derived)
      throw validation_error("real_worst_vector: no conjugation pairing given "
                             "and none derivable from the decomposition");
    pi = *derived;
  }
  // Pairing sanity: involution with conjugate eigenvalues and columns.
  for (std::size_t j = 0; j < N; ++j) {
    const std::size_t p = pi[j];
    if (p >= N || pi[p] != j)
      throw validation_error("real_worst_vector: pairing is not an involution");
    if (std::abs(decomp.lambdas[p] - std::conj(decomp.lambdas[j])) >
        1e-8 * (1.0 + std::abs(decomp.lambdas[j])))
      throw validation_error(
          "real_worst_vector: pairing does not conjugate the spectrum");
    double dev = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      dev = std::max(dev,
                     std::abs(decomp.Q(i, p) - std::conj(decomp.Q(i, j))));
    if (dev > 1e-8)
      throw validation_error(
          "real_worst_vector: pairing does not conjugate the eigenvectors");
  }

  WorstCaseVector out;
  out.xi.assign(N, Cx{});
  const std::size_t m = symcert.theta.size();
  std::vector<bool> done(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (done[i]) continue;
    const std::size_t ip = symcert.pairing[i];
    const std::size_t j0 = anchor_index(gamma, symcert.gamma_index[i], decomp);
    if (ip == i) {
      // Real point. A real eigenvalue can still sit on a conjugate pair of
      // complex eigenvector columns; splitting the weight across the pair
      // keeps the combination real (|xi|^2 total is unchanged).
      if (pi[j0] == j0) {
        out.xi[j0] = std::sqrt(symcert.omega_tilde[i]);
      } else {
        const double half = std::sqrt(0.5 * symcert.omega_tilde[i]);
        out.xi[j0] = half;
        out.xi[pi[j0]] = half;
      }
      done[i] = true;
    } else {
      const std::size_t j1 = pi[j0];
      if (std::abs(decomp.lambdas[j1] - symcert.theta[ip]) >
          1e-8 * (1.0 + std::abs(symcert.theta[ip])))
        throw validation_error(
            "real_worst_vector: paired eigenvalue does not carry the "
            "conjugate support point");
      out.xi[j0] = std::sqrt(symcert.omega_tilde[i]);
      out.xi[j1] = std::sqrt(symcert.omega_tilde[ip]);
      done[i] = done[ip] = true;
    }
  }
  out.v_star = matvec(decomp.Q, out.xi);
  out.attained = attained_from(symcert.omega_tilde, symcert.theta_residuals);
  return out;
}

}  // namespace normax
