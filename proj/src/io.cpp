#include "normax/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "normax/matrix_bridge.hpp"

namespace normax::io {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw validation_error(msg); }

const Json& need(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fail(where + " must be a JSON object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where + " is missing required key \"" + key + "\"");
  return *it;
}

double as_number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  return j.get<double>();
}

std::size_t as_index(const Json& j, const std::string& where) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    fail(where + " must be a nonnegative integer");
  const auto v = j.get<long long>();
  if (v < 0) fail(where + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

Cx as_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    fail(where + " must be a [re, im] pair of numbers");
  return Cx(as_number(j[0], where + "[0]"), as_number(j[1], where + "[1]"));
}

Vec as_vec(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where + " must be an array of [re, im] pairs");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v[i] = as_complex(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

DenseMatrix as_matrix(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    fail(where + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  Vec first = as_vec(j[0], where + "[0]");
  const std::size_t cols = first.size();
  if (cols == 0) fail(where + " rows must be non-empty");
  DenseMatrix m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) m(0, c) = first[c];
  for (std::size_t r = 1; r < rows; ++r) {
    Vec row = as_vec(j[r], where + "[" + std::to_string(r) + "]");
    if (row.size() != cols)
      fail(where + " rows must all have the same length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

Field as_mode(const Json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "real") return Field::Real;
    if (s == "complex") return Field::Complex;
  }
  fail(where + " must be \"real\" or \"complex\"");
}

SpectralDecomposition parse_matrix_block(const Json& m,
                                         std::optional<Field> mode_override) {
  SpectralDecomposition d;
  const std::size_t n = as_index(need(m, "n", "matrix"), "matrix.n");
  d.Q = as_matrix(need(m, "Q", "matrix"), "matrix.Q");
  d.lambdas = as_vec(need(m, "lambdas", "matrix"), "matrix.lambdas");
  d.mode = as_mode(need(m, "mode", "matrix"), "matrix.mode");
  if (mode_override) d.mode = *mode_override;
  if (d.Q.rows != n || d.Q.cols != n)
    fail("matrix.Q must be n x n with n = matrix.n");
  if (d.lambdas.size() != n)
    fail("matrix.lambdas must have length matrix.n");
  if (auto it = m.find("pairing"); it != m.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != n)
      fail("matrix.pairing must be null or an index array of length n");
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t p =
          as_index((*it)[j], "matrix.pairing[" + std::to_string(j) + "]");
      if (p >= n) fail("matrix.pairing entries must lie in [0, n)");
      d.pairing.push_back(p);
    }
  }
  if (d.mode == Field::Real && d.pairing.empty()) {
    if (auto p = derive_real_pairing(d.Q, d.lambdas)) d.pairing = *p;
  }
  Report rep = validate_decomposition(d);
  if (!rep.pass()) {
    for (const auto& item : rep.items)
      if (!item.pass && !item.informational)
        fail("matrix block failed validation: " + item.name);
  }
  return d;
}

CommutingFamily parse_family_block(const Json& f) {
  CommutingFamily fam;
  fam.U = as_matrix(need(f, "U", "family"), "family.U");
  const Json& diags = need(f, "diagonals", "family");
  if (!diags.is_array() || diags.size() < 2)
    fail("family.diagonals must list at least two diagonals (target first)");
  for (std::size_t i = 0; i < diags.size(); ++i)
    fam.diagonals.push_back(
        as_vec(diags[i], "family.diagonals[" + std::to_string(i) + "]"));
  if (auto it = f.find("matrices"); it != f.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != diags.size())
      fail("family.matrices must have one matrix per diagonal");
    for (std::size_t i = 0; i < it->size(); ++i)
      fam.matrices.push_back(
          as_matrix((*it)[i], "family.matrices[" + std::to_string(i) + "]"));
  }
  return fam;
}

void write_number(std::string& out, const Json& j) {
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (!std::isfinite(x))
      throw validation_error("cannot serialize a non-finite number");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    out += buf;
  } else {
    out += j.dump();
  }
}

void write_json(std::string& out, const Json& j, int depth) {
  const auto indent = [&out](int d) { out.append(2 * static_cast<std::size_t>(d), ' '); };
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      indent(depth + 1);
      out += Json(it.key()).dump();
      out += ": ";
      write_json(out, it.value(), depth + 1);
      if (i + 1 < j.size()) out += ',';
      out += '\n';
    }
    indent(depth);
    out += '}';
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      indent(depth + 1);
      write_json(out, j[i], depth + 1);
      if (i + 1 < j.size()) out += ',';
      out += '\n';
    }
    indent(depth);
    out += ']';
  } else if (j.is_number()) {
    write_number(out, j);
  } else {
    out += j.dump();  // string, bool, null
  }
}

}  // namespace

std::string dump_fixed(const Json& j) {
  std::string out;
  write_json(out, j, 0);
  out += '\n';
  return out;
}

ParsedInput parse_input_text(const std::string& text,
                             std::optional<Field> mode_override) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("input is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top-level input must be a JSON object");

  ParsedInput out;
  const bool has_family = doc.contains("family");
  const bool has_matrix = doc.contains("matrix");
  if (has_family && has_matrix)
    fail("\"family\" and \"matrix\" blocks are mutually exclusive");

  if (has_family) {
    for (const char* key : {"points", "kind", "F", "Phi"})
      if (doc.contains(key))
        fail(std::string("a \"family\" input fixes the point set and function "
                         "tables itself; remove \"") + key + "\"");
    CommutingFamily fam = parse_family_block(doc["family"]);
    CommutingProblem cp = build_commuting_problem(fam);
    if (mode_override && *mode_override != cp.table.mode) {
      cp.table = build_basis_problem(
          cp.gamma, BasisKind::custom(cp.table.F, cp.table.Phi), *mode_override);
      cp.decomp.mode = *mode_override;
    }
    out.family = std::move(fam);
    out.table = std::move(cp.table);
    out.decomp = std::move(cp.decomp);
  }

  if (has_matrix) out.decomp = parse_matrix_block(doc["matrix"], mode_override);

  if (!has_family) {
    // Field of the scalar problem: explicit override, then the document's
    // "mode", then the matrix block's mode, then complex.
    Field mode = Field::Complex;
    if (out.decomp) mode = out.decomp->mode;
    if (auto it = doc.find("mode"); it != doc.end())
      mode = as_mode(*it, "mode");
    if (mode_override) mode = *mode_override;

    std::optional<PointSet> gamma;
    if (out.decomp) {
      gamma = from_spectrum(out.decomp->lambdas);
      if (auto it = doc.find("points"); it != doc.end()) {
        PointSet given = from_spectrum(as_vec(*it, "points"));
        bool match = given.points.size() == gamma->points.size();
        const double tol = default_point_tol(gamma->points);
        for (std::size_t j = 0; match && j < given.points.size(); ++j)
          match = std::abs(given.points[j] - gamma->points[j]) <= tol;
        if (!match)
          fail("\"points\" disagrees with the spectrum of the matrix block");
      }
    } else if (auto it = doc.find("points"); it != doc.end()) {
      gamma = from_spectrum(as_vec(*it, "points"));
    }

    const bool has_kind = doc.contains("kind");
    const bool has_tables = doc.contains("F") || doc.contains("Phi");
    if (has_kind && has_tables)
      fail("give either \"kind\"/\"k\" or explicit \"F\"/\"Phi\" tables, not both");
    if (has_kind || has_tables) {
      if (!gamma)
        fail("a function system needs a point set: give \"points\" or a "
             "\"matrix\" block");
      BasisKind kind;
      if (has_kind) {
        const std::string name = need(doc, "kind", "input").is_string()
                                     ? doc["kind"].get<std::string>()
                                     : std::string();
        const std::size_t k = as_index(need(doc, "k", "input"), "k");
        if (k == 0) fail("k must be at least 1");
        if (name == "gmres") kind = BasisKind::gmres(k);
        else if (name == "chebyshev") kind = BasisKind::chebyshev(k);
        else fail("kind must be \"gmres\" or \"chebyshev\"");
      } else {
        Vec F = as_vec(need(doc, "F", "input"), "F");
        DenseMatrix Phi = as_matrix(need(doc, "Phi", "input"), "Phi");
        if (F.size() != gamma->size() || Phi.rows != gamma->size())
          fail("F and Phi must have one entry per distinct point of Gamma (" +
               std::to_string(gamma->size()) + ")");
        kind = BasisKind::custom(std::move(F), std::move(Phi));
      }
      out.table = build_basis_problem(*gamma, kind, mode);
    }
  }

  if (auto it = doc.find("alpha"); it != doc.end() && !it->is_null())
    out.alpha = Coefficients{as_vec(*it, "alpha")};
  return out;
}

ParsedInput parse_input_file(const std::string& path,
                             std::optional<Field> mode_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_input_text(buf.str(), mode_override);
}

Json cx_json(const Cx& z) { return Json::array({z.real(), z.imag()}); }

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (const Cx& z : v) a.push_back(cx_json(z));
  return a;
}

Json certificate_json(const Certificate& c) {
  Json j;
  j["support"] = Json::array();
  for (std::size_t s : c.support) j["support"].push_back(s);
  j["omega"] = Json::array();
  for (double w : c.omega) j["omega"].push_back(w);
  j["condition_residual"] = c.condition_residual;
  j["ell"] = c.ell;
  return j;
}

Json worst_case_json(const WorstCaseVector& w) {
  Json j;
  j["v"] = vec_json(w.v_star);
  j["attained"] = w.attained;
  return j;
}

Json solution_json(const MinimaxSolution& s) {
  Json j;
  j["alpha"] = vec_json(s.alpha_star.alpha);
  j["delta"] = s.delta;
  j["lower_bound"] = s.lower_bound;
  j["iterations"] = s.iterations;
  j["converged"] = s.converged;
  return j;
}

Json checks_json(const Report& r) {
  Json a = Json::array();
  for (const auto& item : r.items) {
    Json j;
    j["name"] = item.name;
    j["pass"] = item.pass;
    j["residual"] = item.residual;
    j["informational"] = item.informational;
    a.push_back(j);
  }
  return a;
}

}  // namespace normax::io
