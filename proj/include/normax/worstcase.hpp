#pragma once

#include <vector>

#include "normax/certificate.hpp"
#include "normax/matrix_bridge.hpp"

namespace normax {

/// Conjugate-closed certificate support theta_1..theta_m with merged weights.
/// Built from a certificate for the realized (real-coefficient) solution:
/// a real support point keeps its weight; a non-real point splits half its
/// weight onto its conjugate, merging with the conjugate's own half when both
/// lie in the support.
struct SymmetrizedCertificate {
  Vec theta;
  std::vector<double> omega_tilde;
  std::vector<std::size_t> pairing;      // involution: theta_{pairing[i]} = conj(theta_i)
  std::vector<std::size_t> gamma_index;  // position of theta_i in Gamma
  Vec theta_residuals;                   // r(theta_i) at the realized solution
  double delta = 0.0;
};

struct WorstCaseVector {
  Vec v_star;
  Vec xi;  // eigenbasis coordinates, |xi_j|^2 = the weight placed on index j
  double attained = 0.0;  // ||f(A)v* - p*(A)v*||
};

/// v* = Q xi with xi_j = +sqrt(omega_j) at the first eigenvalue index of each
/// support point and zero elsewhere. attained equals
/// sqrt(sum_j omega_j |r(mu_j)|^2), the norm realized by this unit vector.
WorstCaseVector complex_worst_vector(const Certificate& cert,
                                     const SpectralDecomposition& decomp,
                                     const PointSet& gamma);

/// Replace coefficients by their real parts. Valid (never increases the
/// uniform error) whenever the table is conjugate-symmetric: the conjugated
/// coefficient vector has the same residual moduli on a conjugate-closed
/// Gamma, and the error of a midpoint of two polynomials is at most the
/// larger of the two errors.
Coefficients realize_polynomial(const Coefficients& alpha,
                                const EvaluationTable& table);

/// Merge the certificate support with its conjugates (rules above). The
/// certificate must have been recovered from the realized solution, so that
/// residuals at conjugate points are conjugates of stored ones. A negative
/// pair_tol selects 1e-10 * (1 + max|lambda|).
SymmetrizedCertificate symmetrize_certificate(const Certificate& cert,
                                              const PointSet& gamma,
                                              double pair_tol = -1.0);

/// Real worst-case vector: xi places sqrt(omega_tilde) on conjugate-paired
/// eigenvalue indices, so the columns of Q combine into real vectors. Requires
/// the decomposition's conjugation involution (derived on the fly when absent
/// but derivable).
WorstCaseVector real_worst_vector(const SymmetrizedCertificate& symcert,
                                  const SpectralDecomposition& decomp,
                                  const PointSet& gamma);

}  // namespace normax
