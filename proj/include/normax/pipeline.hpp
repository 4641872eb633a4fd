#pragma once

#include "normax/certificate.hpp"
#include "normax/matrix_bridge.hpp"
#include "normax/worstcase.hpp"

namespace normax {

/// Canonical normal-matrix realization of a point set: complex mode gives
/// Q = I over the expanded spectrum; real mode places each conjugate pair on
/// a 2x2 block with columns (e_u -/+ i e_v)/sqrt(2), which keeps the
/// reconstructed matrix real and carries a valid conjugation pairing.
SpectralDecomposition canonical_decomposition(const PointSet& gamma, Field mode);

struct PipelineOptions {
  SolveOptions solve;
  double active_tol = 1e-8;
  double cond_tol = 1e-8;
  bool prune = false;
};

struct PipelineResult {
  MinimaxSolution sol;  // realized coefficients in real mode
  Certificate cert;
  bool has_sym = false;
  SymmetrizedCertificate symcert;
  WorstCaseVector wcv;
  double attained_check = 0.0;  // independent best_vector_approx at v*
};

/// solve -> (realize) -> recover weights -> (prune) -> worst-case vector.
/// Throws convergence_error when the solver misses its gap, not_optimal_error
/// when certificate recovery refutes optimality (cannot happen for converged
/// solves short of numerical trouble), validation_error on inconsistent data.
PipelineResult run_pipeline(const EvaluationTable& table,
                            const SpectralDecomposition& decomp,
                            const PipelineOptions& opts = {});

}  // namespace normax
