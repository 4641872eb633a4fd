#pragma once

#include <cstddef>
#include <vector>

#include "normax/numerics.hpp"
#include "normax/report.hpp"

namespace normax {

enum class Field { Real, Complex };

/// Finite point set Gamma with bookkeeping for repeated eigenvalues: each
/// deduplicated point remembers which original spectrum indices it stands for.
struct PointSet {
  Vec points;
  std::vector<std::vector<std::size_t>> multiplicity_map;

  std::size_t size() const { return points.size(); }
  std::size_t original_size() const {
    std::size_t t = 0;
    for (const auto& c : multiplicity_map) t += c.size();
    return t;
  }
};

/// Collapse near-coincident eigenvalues into distinct representatives.
/// Clustering is a greedy sweep in lexicographic (re, im) order: a point joins
/// the first existing cluster whose representative lies within dedupe_tol,
/// otherwise it opens a new one. Output clusters are ordered by their smallest
/// original index, so already-distinct input keeps its order. A negative
/// dedupe_tol selects the default 1e-10 * (1 + max|lambda|).
PointSet from_spectrum(const Vec& eigenvalues, double dedupe_tol = -1.0);

/// Values of f and the basis functions phi_1..phi_k on Gamma. Functions are
/// stored as evaluation tables only; closures and symbolic forms are evaluated
/// once at construction.
struct EvaluationTable {
  PointSet gamma;
  Vec F;            // F[j] = f(lambda_j)
  DenseMatrix Phi;  // Phi(j, i) = phi_{i+1}(lambda_j), n x k
  Field mode = Field::Complex;

  std::size_t n() const { return gamma.points.size(); }
  std::size_t k() const { return Phi.cols; }
};

struct Coefficients {
  Vec alpha;
};

/// Basis selector: two named instances plus fully custom tables.
///   gmres(k):     f = 1,   phi_i = z^i       (i = 1..k)
///   chebyshev(k): f = z^k, phi_i = z^{i-1}   (i = 1..k)
struct BasisKind {
  enum class Tag { gmres, chebyshev, custom } tag = Tag::gmres;
  std::size_t k = 1;
  Vec F;            // custom only
  DenseMatrix Phi;  // custom only

  static BasisKind gmres(std::size_t k);
  static BasisKind chebyshev(std::size_t k);
  static BasisKind custom(Vec F, DenseMatrix Phi);
};

/// Fill the tables by direct evaluation (monomials by repeated
/// multiplication). Real mode runs validate_conjugate_symmetry and throws on
/// violation.
EvaluationTable build_basis_problem(const PointSet& gamma, const BasisKind& kind,
                                    Field mode);

struct SymmetryReport {
  Report report;
  // conj_index[j] = index of the point closest to conj(points[j]), or -1 when
  // none lies within pair_tol.
  std::vector<std::ptrdiff_t> conj_index;
};

/// Check that Gamma is conjugate-closed and that the tables commute with
/// conjugation: conj f(z) = f(conj z) and conj phi_i(z) = phi_i(conj z) for
/// every point. A negative pair_tol selects 1e-10 * (1 + max|lambda|).
SymmetryReport validate_conjugate_symmetry(const EvaluationTable& table,
                                           double pair_tol = -1.0);

double default_point_tol(const Vec& points);

}  // namespace normax
