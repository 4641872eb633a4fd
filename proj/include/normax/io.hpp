#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "normax/pipeline.hpp"

namespace normax::io {

using Json = nlohmann::ordered_json;

/// Everything a command might find in an input file. `table` is fully built
/// (dedupe, basis evaluation, real-mode symmetry validation already applied).
struct ParsedInput {
  std::optional<EvaluationTable> table;
  std::optional<SpectralDecomposition> decomp;
  std::optional<CommutingFamily> family;
  std::optional<Coefficients> alpha;
};

/// Accepted document shape (one JSON object):
///   problem:  "points": [[re,im],...]  plus either "kind":"gmres"|"chebyshev"
///             with "k": int, or "F"/"Phi" arrays; "mode": "real"|"complex".
///   matrix:   "matrix": {"n", "Q", "lambdas", "mode", "pairing"|null}.
///             With a matrix present, Gamma is derived from its spectrum; a
///             "points" array, if also given, must agree with it.
///   family:   "family": {"U", "diagonals", optional "matrices"}.
///   external: "alpha": [[re,im],...] — coefficients to certify.
/// `mode_override` (from --mode) rebuilds the table in the requested field.
ParsedInput parse_input_text(const std::string& text,
                             std::optional<Field> mode_override = {});
ParsedInput parse_input_file(const std::string& path,
                             std::optional<Field> mode_override = {});

/// Serialize with a fixed layout: 2-space indent, insertion-ordered keys,
/// floating-point numbers always as %.16e (17 significant digits, exact
/// round-trip), integers as integers. Throws on non-finite numbers.
std::string dump_fixed(const Json& j);

Json cx_json(const Cx& z);
Json vec_json(const Vec& v);
Json certificate_json(const Certificate& c);
Json worst_case_json(const WorstCaseVector& w);
Json solution_json(const MinimaxSolution& s);
Json checks_json(const Report& r);

}  // namespace normax::io
