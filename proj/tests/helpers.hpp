#pragma once

// Instance builders shared across the test suites: canonical small problems
// with hand-derivable answers, plus seeded random instances.

#include <cmath>
#include <cstdint>
#include <utility>

#include "normax/kernels.hpp"
#include "normax/pipeline.hpp"

namespace th {

using namespace normax;

// f = 1 approximated by multiples of z on {1, 3}. Optimum: alpha = 1/2,
// delta = 1/2, weights (3/4, 1/4), worst vector (sqrt(3)/2, 1/2) for Q = I.
inline EvaluationTable line13(Field mode = Field::Real) {
  return build_basis_problem(from_spectrum({Cx(1, 0), Cx(3, 0)}),
                             BasisKind::gmres(1), mode);
}

// z^2 approximated from span{1, z} on {-1, 0, 1}. Optimum: p = 1/2,
// delta = 1/2, weights (1/4, 1/2, 1/4).
inline EvaluationTable cheb3(Field mode = Field::Real) {
  return build_basis_problem(from_spectrum({Cx(-1, 0), Cx(0, 0), Cx(1, 0)}),
                             BasisKind::chebyshev(2), mode);
}

// f = 1 approximated by multiples of z on the fourth roots of unity
// (order 1, i, -1, -i). Optimum: alpha = 0, delta = 1, uniform weights.
inline EvaluationTable roots4(Field mode = Field::Complex) {
  return build_basis_problem(
      from_spectrum({Cx(1, 0), Cx(0, 1), Cx(-1, 0), Cx(0, -1)}),
      BasisKind::gmres(1), mode);
}

// Quarter-turn rotation [[0,-1],[1,0]]: spectrum {i, -i}, conjugate columns,
// pairing (1, 0).
inline SpectralDecomposition quarter_turn() {
  const double s = 1.0 / std::sqrt(2.0);
  SpectralDecomposition d;
  d.Q = DenseMatrix(2, 2);
  d.Q(0, 0) = Cx(s, 0);
  d.Q(1, 0) = Cx(0, -s);
  d.Q(0, 1) = Cx(s, 0);
  d.Q(1, 1) = Cx(0, s);
  d.lambdas = {Cx(0, 1), Cx(0, -1)};
  d.mode = Field::Real;
  d.pairing = {1, 0};
  return d;
}

// Unitary factor of a complex Gaussian matrix by twice-through modified
// Gram-Schmidt (independent of the library's Householder code).
inline DenseMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  GaussianStream g(seed);
  DenseMatrix q(n, n);
  for (auto& z : q.a) z = Cx(g.next(), g.next());
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t t = 0; t < j; ++t) {
        Cx proj = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          proj += std::conj(q(i, t)) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= proj * q(i, t);
      }
    double nn = 0.0;
    for (std::size_t i = 0; i < n; ++i) nn += std::norm(q(i, j));
    nn = std::sqrt(nn);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nn;
  }
  return q;
}

// Real orthogonal factor of a real Gaussian matrix, same construction.
inline DenseMatrix random_orthogonal(std::size_t n, std::uint64_t seed) {
  GaussianStream g(seed);
  DenseMatrix q(n, n);
  for (auto& z : q.a) z = Cx(g.next(), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t t = 0; t < j; ++t) {
        Cx proj = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          proj += std::conj(q(i, t)) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= proj * q(i, t);
      }
    double nn = 0.0;
    for (std::size_t i = 0; i < n; ++i) nn += std::norm(q(i, j));
    nn = std::sqrt(nn);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nn;
  }
  return q;
}

inline Vec disk_spectrum(std::size_t n, std::uint64_t seed) {
  GaussianStream g(seed);
  Vec v(n);
  for (auto& z : v) {
    z = Cx(g.next(), g.next());
    const double m = std::abs(z);
    if (m > 1.0) z /= m * m;  // fold the tail back into the disk
  }
  return v;
}

// Conjugate-closed spectrum: pairs a +- bi plus a few reals.
inline Vec conjugate_closed_spectrum(std::size_t n, std::uint64_t seed) {
  GaussianStream g(seed);
  Vec v;
  while (v.size() + 2 <= n) {
    const double a = g.next(), b = std::abs(g.next()) + 0.05;
    v.push_back(Cx(a, b));
    v.push_back(Cx(a, -b));
  }
  while (v.size() < n) v.push_back(Cx(g.next(), 0));
  return v;
}

// Random normal matrix with the given spectrum: complex (random unitary
// eigenbasis) or real (orthogonal rotation of the canonical block form).
inline SpectralDecomposition random_decomposition(const Vec& lambdas,
                                                  Field mode,
                                                  std::uint64_t seed) {
  const PointSet gamma = from_spectrum(lambdas);
  SpectralDecomposition d = canonical_decomposition(gamma, mode);
  const DenseMatrix rot = mode == Field::Real
                              ? random_orthogonal(d.n(), seed)
                              : random_unitary(d.n(), seed);
  d.Q = matmul(rot, d.Q);
  return d;
}

}  // namespace th
