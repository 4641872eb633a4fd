#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"

using namespace normax;

namespace {

double max_imag(const Vec& v) {
  double m = 0.0;
  for (const Cx& z : v) m = std::max(m, std::abs(z.imag()));
  return m;
}

}  // namespace

TEST_CASE("the canonical complex realization is diagonal") {
  const PointSet g = from_spectrum(Vec{Cx(1, 0), Cx(1, 0), Cx(3, 0)});
  REQUIRE(g.size() == 2);
  const SpectralDecomposition d = canonical_decomposition(g, Field::Complex);
  CHECK(d.n() == 3);  // expanded back to the original index range
  CHECK(d.lambdas == Vec{Cx(1, 0), Cx(1, 0), Cx(3, 0)});
  CHECK(validate_decomposition(d).pass());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(d.Q(i, j) == (i == j ? Cx(1, 0) : Cx(0, 0)));
}

TEST_CASE("the canonical real realization reconstructs a real matrix") {
  for (std::uint64_t seed : {501u, 502u}) {
    const PointSet g = from_spectrum(th::conjugate_closed_spectrum(6, seed));
    const SpectralDecomposition d = canonical_decomposition(g, Field::Real);
    const Report rep = validate_decomposition(d);
    CHECK(rep.pass());
    bool saw_real_reconstruction = false;
    for (const CheckItem& c : rep.items)
      if (c.name == "real_reconstruction") {
        saw_real_reconstruction = true;
        CHECK(c.pass);
      }
    CHECK(saw_real_reconstruction);
  }
}

TEST_CASE("a mixed spectrum pairs its conjugates and fixes its reals") {
  const PointSet g = from_spectrum(Vec{Cx(1, 0), Cx(0, 1), Cx(0, -1)});
  const SpectralDecomposition d = canonical_decomposition(g, Field::Real);
  CHECK(d.pairing == std::vector<std::size_t>{0, 2, 1});
  CHECK(validate_decomposition(d).pass());
}

TEST_CASE("real realization requires conjugate-balanced multiplicities") {
  const PointSet g = from_spectrum(Vec{Cx(0, 1), Cx(0, 1), Cx(0, -1)});
  CHECK_THROWS_AS((void)canonical_decomposition(g, Field::Real),
                  validation_error);
}

TEST_CASE("the pipeline closes the loop on random complex instances") {
  for (std::uint64_t seed : {301u, 302u, 303u, 304u, 305u}) {
    const Vec lambdas = th::disk_spectrum(10, seed);
    const EvaluationTable t = build_basis_problem(
        from_spectrum(lambdas),
        seed % 2 == 0 ? BasisKind::gmres(2) : BasisKind::chebyshev(2),
        Field::Complex);
    const SpectralDecomposition d =
        th::random_decomposition(lambdas, Field::Complex, seed + 7000);
    const PipelineResult pr = run_pipeline(t, d);

    CHECK(pr.sol.converged);
    CHECK_FALSE(pr.has_sym);
    CHECK(verify_certificate(pr.cert, pr.sol, t).pass());
    CHECK(std::abs(norm2(pr.wcv.v_star) - 1.0) < 1e-12);
    CHECK(std::abs(pr.wcv.attained - pr.sol.delta) <=
          1e-8 * std::max(1.0, pr.sol.delta));
    CHECK(std::abs(pr.attained_check - pr.sol.delta) <=
          1e-8 * std::max(1.0, pr.sol.delta));
  }
}

TEST_CASE("the pipeline closes the loop on random real instances") {
  for (std::uint64_t seed : {311u, 312u, 313u}) {
    const Vec lambdas = th::conjugate_closed_spectrum(8, seed);
    const EvaluationTable t = build_basis_problem(from_spectrum(lambdas),
                                                  BasisKind::gmres(2),
                                                  Field::Real);
    const SpectralDecomposition d =
        th::random_decomposition(lambdas, Field::Real, seed + 8000);
    const PipelineResult pr = run_pipeline(t, d);

    CHECK(pr.sol.converged);
    CHECK(pr.has_sym);
    CHECK(max_imag(pr.sol.alpha_star.alpha) == 0.0);
    CHECK(max_imag(pr.wcv.v_star) < 1e-10);
    CHECK(std::abs(norm2(pr.wcv.v_star) - 1.0) < 1e-12);
    CHECK(verify_certificate(pr.cert, pr.sol, t).pass());

    double wsum = 0.0;
    for (double w : pr.symcert.omega_tilde) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(std::abs(pr.attained_check - pr.sol.delta) <=
          1e-8 * std::max(1.0, pr.sol.delta));
  }
}

TEST_CASE("an impossible iteration budget surfaces as a convergence error") {
  const EvaluationTable t = build_basis_problem(
      from_spectrum(th::disk_spectrum(16, 321)), BasisKind::gmres(3),
      Field::Complex);
  const SpectralDecomposition d = canonical_decomposition(t.gamma, Field::Complex);
  PipelineOptions opts;
  opts.solve.max_iter = 1;
  CHECK_THROWS_AS((void)run_pipeline(t, d, opts), convergence_error);
}

TEST_CASE("the pipeline prunes on request and stays consistent") {
  const EvaluationTable t = th::roots4();
  const SpectralDecomposition d = canonical_decomposition(t.gamma, Field::Complex);
  PipelineOptions opts;
  opts.prune = true;
  const PipelineResult pr = run_pipeline(t, d, opts);
  CHECK(pr.cert.pruned);
  if (!pr.cert.prune_warning) CHECK(pr.cert.ell <= caratheodory_bound(t));
  CHECK(verify_certificate(pr.cert, pr.sol, t).pass());
  CHECK(std::abs(pr.attained_check - 1.0) <= 1e-8);
}
