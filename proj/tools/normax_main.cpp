// Command-line front end: solve scalar minimax problems on finite point sets,
// recover dual optimality certificates, and build worst-case unit vectors for
// normal matrices and commuting families.
//
// Exit codes: 0 success, 1 a mathematical claim failed (coefficients refuted
// or a verification check failed), 2 the solver missed its convergence gap,
// 3 input/schema/usage trouble.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "normax/io.hpp"
#include "normax/kernels.hpp"
#include "normax/pipeline.hpp"

namespace {

using Json = normax::io::Json;
using normax::Certificate;
using normax::Coefficients;
using normax::Cx;
using normax::DenseMatrix;
using normax::EvaluationTable;
using normax::Field;
using normax::MinimaxSolution;
using normax::PipelineOptions;
using normax::PipelineResult;
using normax::PointSet;
using normax::Report;
using normax::SolveOptions;
using normax::SpectralDecomposition;
using normax::Vec;
using normax::validation_error;

struct CommonOpts {
  std::string input;
  double gap_tol = 1e-10;
  std::size_t max_iter = 100000;
  double active_tol = 1e-8;
  double cond_tol = 1e-8;
  bool prune = false;
  std::size_t trials = 0;
  std::uint64_t seed = 12345;
  std::string mode;
  bool timings = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input = true) {
  if (needs_input)
    cmd->add_option("input", o.input, "JSON input file")->required();
  cmd->add_option("--gap-tol", o.gap_tol,
                  "duality-gap tolerance for declaring convergence");
  cmd->add_option("--max-iter", o.max_iter, "solver iteration cap");
  cmd->add_option("--active-tol", o.active_tol,
                  "relative threshold for support extraction");
  cmd->add_option("--cond-tol", o.cond_tol,
                  "tolerance on the certificate condition residual");
  cmd->add_flag("--prune", o.prune,
                "reduce the certificate support to the size bound");
  cmd->add_option("--trials", o.trials,
                  "random unit vectors for the sampling cross-check");
  cmd->add_option("--seed", o.seed, "seed for the sampling cross-check");
  cmd->add_option("--mode", o.mode, "field override: real or complex")
      ->check(CLI::IsMember({"real", "complex"}));
  cmd->add_flag("--timings", o.timings,
                "include wall-clock stage timings in the report");
}

std::optional<Field> mode_of(const CommonOpts& o) {
  if (o.mode == "real") return Field::Real;
  if (o.mode == "complex") return Field::Complex;
  return std::nullopt;
}

SolveOptions solve_opts(const CommonOpts& o) {
  SolveOptions s;
  s.gap_tol = o.gap_tol;
  s.max_iter = o.max_iter;
  return s;
}

PipelineOptions pipeline_opts(const CommonOpts& o) {
  PipelineOptions p;
  p.solve = solve_opts(o);
  p.active_tol = o.active_tol;
  p.cond_tol = o.cond_tol;
  p.prune = o.prune;
  return p;
}

struct StageClock {
  bool enabled = false;
  Json entries = Json::object();
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void lap(const char* name) {
    const auto t1 = std::chrono::steady_clock::now();
    if (enabled)
      entries[name] =
          std::chrono::duration<double, std::milli>(t1 - t0).count();
    t0 = t1;
  }
};

void emit(Json& report, const StageClock& clock) {
  if (clock.enabled) report["timings_ms"] = clock.entries;
  std::fputs(normax::io::dump_fixed(report).c_str(), stdout);
}

const char* mode_name(Field f) {
  return f == Field::Real ? "real" : "complex";
}

const EvaluationTable& require_table(const normax::io::ParsedInput& in,
                                     const char* cmd) {
  if (!in.table)
    throw validation_error(std::string(cmd) +
                           " needs a scalar problem: give \"points\" with a "
                           "basis, or a \"family\" block");
  return *in.table;
}

// Mirror of the pipeline's real-mode post step, for commands that stop at the
// solver: real problems report real coefficients.
void realize_in_place(MinimaxSolution& sol, const EvaluationTable& table) {
  if (table.mode != Field::Real) return;
  sol.alpha_star = normax::realize_polynomial(sol.alpha_star, table);
  sol.residuals = normax::residuals_for(table, sol.alpha_star.alpha);
  sol.delta = 0.0;
  for (const Cx& r : sol.residuals)
    sol.delta = std::max(sol.delta, std::abs(r));
}

Json problem_header(const char* cmd, const EvaluationTable& table) {
  Json j;
  j["command"] = cmd;
  j["mode"] = mode_name(table.mode);
  j["n"] = table.n();
  j["k"] = table.k();
  return j;
}

Json symmetrized_json(const normax::SymmetrizedCertificate& s) {
  Json j;
  j["theta"] = normax::io::vec_json(s.theta);
  j["omega_tilde"] = Json::array();
  for (double w : s.omega_tilde) j["omega_tilde"].push_back(w);
  j["pairing"] = Json::array();
  for (std::size_t p : s.pairing) j["pairing"].push_back(p);
  j["gamma_index"] = Json::array();
  for (std::size_t g : s.gamma_index) j["gamma_index"].push_back(g);
  j["delta"] = s.delta;
  return j;
}

Json pipeline_json(const PipelineResult& res) {
  Json j;
  j["solution"] = normax::io::solution_json(res.sol);
  j["certificate"] = normax::io::certificate_json(res.cert);
  if (res.has_sym) j["symmetrized"] = symmetrized_json(res.symcert);
  j["worst_case"] = normax::io::worst_case_json(res.wcv);
  j["attained_check"] = res.attained_check;
  return j;
}

SpectralDecomposition decomposition_for(const normax::io::ParsedInput& in,
                                        const EvaluationTable& table) {
  if (in.decomp) return *in.decomp;
  return normax::canonical_decomposition(table.gamma, table.mode);
}

int run_solve(const CommonOpts& o) {
  StageClock clock{o.timings};
  const auto in = normax::io::parse_input_file(o.input, mode_of(o));
  const EvaluationTable& table = require_table(in, "solve");
  clock.lap("parse");

  MinimaxSolution sol = normax::solve_minimax(table, solve_opts(o));
  realize_in_place(sol, table);
  clock.lap("solve");

  Json report = problem_header("solve", table);
  report["solution"] = normax::io::solution_json(sol);
  emit(report, clock);
  return sol.converged ? 0 : 2;
}

int run_certify(const CommonOpts& o) {
  StageClock clock{o.timings};
  const auto in = normax::io::parse_input_file(o.input, mode_of(o));
  const EvaluationTable& table = require_table(in, "certify");
  clock.lap("parse");

  MinimaxSolution sol;
  sol.mode = table.mode;
  if (in.alpha) {
    // Certify coefficients supplied by the caller instead of solving.
    if (in.alpha->alpha.size() != table.k())
      throw validation_error("alpha must have one coefficient per basis "
                             "function (" + std::to_string(table.k()) + ")");
    sol.alpha_star = *in.alpha;
    sol.residuals = normax::residuals_for(table, sol.alpha_star.alpha);
    for (const Cx& r : sol.residuals)
      sol.delta = std::max(sol.delta, std::abs(r));
    sol.lower_bound = 0.0;
    sol.converged = true;
  } else {
    sol = normax::solve_minimax(table, solve_opts(o));
    realize_in_place(sol, table);
    if (!sol.converged) {
      Json report = problem_header("certify", table);
      report["solution"] = normax::io::solution_json(sol);
      emit(report, clock);
      return 2;
    }
  }
  clock.lap("solve");

  Json report = problem_header("certify", table);
  report["solution"] = normax::io::solution_json(sol);
  try {
    const auto active = normax::extract_active_set(sol, o.active_tol);
    Certificate cert = normax::recover_weights(sol, table, active, o.cond_tol);
    if (o.prune) cert = normax::caratheodory_prune(cert, table);
    clock.lap("certificate");
    const Report checks = normax::verify_certificate(cert, sol, table);
    report["optimal"] = true;
    report["certificate"] = normax::io::certificate_json(cert);
    report["checks"] = normax::io::checks_json(checks);
    emit(report, clock);
    return checks.pass() ? 0 : 1;
  } catch (const normax::not_optimal_error& e) {
    clock.lap("certificate");
    report["optimal"] = false;
    report["message"] = e.what();
    report["best_condition_residual"] = e.best_residual;
    emit(report, clock);
    return 1;
  }
}

int run_worstcase(const CommonOpts& o) {
  StageClock clock{o.timings};
  const auto in = normax::io::parse_input_file(o.input, mode_of(o));
  const EvaluationTable& table = require_table(in, "worstcase");
  const SpectralDecomposition decomp = decomposition_for(in, table);
  clock.lap("parse");

  const PipelineResult res = normax::run_pipeline(table, decomp, pipeline_opts(o));
  clock.lap("pipeline");

  Json report = problem_header("worstcase", table);
  report.update(pipeline_json(res));
  if (o.trials > 0) {
    const normax::SampleResult sr = normax::sample_maxmin(
        decomp, table, o.trials, o.seed, &res.wcv.v_star);
    clock.lap("sampling");
    Json s;
    s["trials"] = o.trials;
    s["seed"] = o.seed;
    s["max_value"] = sr.max_value;
    report["sample"] = s;
  }
  emit(report, clock);
  return 0;
}

int run_verify(const CommonOpts& o) {
  StageClock clock{o.timings};
  const auto in = normax::io::parse_input_file(o.input, mode_of(o));
  const EvaluationTable& table = require_table(in, "verify");
  const SpectralDecomposition decomp = decomposition_for(in, table);
  clock.lap("parse");

  Report all;
  if (in.decomp) {
    const Report d = normax::validate_decomposition(*in.decomp);
    for (const auto& item : d.items)
      all.add("decomposition." + item.name, item.pass, item.residual,
              item.informational);
  }
  if (table.mode == Field::Real) {
    const auto sym = normax::validate_conjugate_symmetry(table);
    for (const auto& item : sym.report.items)
      all.add("symmetry." + item.name, item.pass, item.residual,
              item.informational);
  }

  const PipelineResult res = normax::run_pipeline(table, decomp, pipeline_opts(o));
  clock.lap("pipeline");
  const Report cert_checks =
      normax::verify_certificate(res.cert, res.sol, table);
  for (const auto& item : cert_checks.items)
    all.add("certificate." + item.name, item.pass, item.residual,
            item.informational);

  const double dev = std::abs(res.attained_check - res.sol.delta);
  all.add("worst_vector_attains_delta",
          dev <= 1e-8 * std::max(1.0, res.sol.delta), dev);
  const double unit_dev = std::abs(normax::norm2(res.wcv.v_star) - 1.0);
  all.add("worst_vector_unit_norm", unit_dev <= 1e-10, unit_dev);
  if (table.mode == Field::Real) {
    double im = 0.0;
    for (const Cx& c : res.wcv.v_star) im = std::max(im, std::abs(c.imag()));
    all.add("worst_vector_real", im <= 1e-10, im);
  }

  Json report = problem_header("verify", table);
  report["delta"] = res.sol.delta;
  report["checks"] = normax::io::checks_json(all);
  report["pass"] = all.pass();
  emit(report, clock);
  return all.pass() ? 0 : 1;
}

int run_commuting(const CommonOpts& o) {
  StageClock clock{o.timings};
  const auto in = normax::io::parse_input_file(o.input, mode_of(o));
  if (!in.family)
    throw validation_error("commuting needs a \"family\" block");
  const EvaluationTable& table = require_table(in, "commuting");
  const SpectralDecomposition& decomp = *in.decomp;
  clock.lap("parse");

  const PipelineResult res = normax::run_pipeline(table, decomp, pipeline_opts(o));
  clock.lap("pipeline");

  Json report = problem_header("commuting", table);
  report["labels"] = table.n();
  report["dimension"] = decomp.n();
  report.update(pipeline_json(res));

  bool norm_ok = true;
  if (!in.family->matrices.empty()) {
    // Independent check in matrix land: assemble the best-approximation error
    // matrix and compare its spectral norm against the scalar optimum.
    DenseMatrix E = in.family->matrices[0];
    for (std::size_t i = 0; i + 1 < in.family->matrices.size(); ++i) {
      const Cx a = res.sol.alpha_star.alpha[i];
      const DenseMatrix& Ai = in.family->matrices[i + 1];
      for (std::size_t t = 0; t < E.a.size(); ++t) E.a[t] -= a * Ai.a[t];
    }
    const double mn = normax::spectral_norm(E);
    const double dev = std::abs(mn - res.sol.delta);
    norm_ok = dev <= 1e-8 * std::max(1.0, res.sol.delta);
    clock.lap("matrix_norm");
    Json m;
    m["spectral_norm"] = mn;
    m["matches_delta"] = norm_ok;
    m["deviation"] = dev;
    report["matrix_check"] = m;
  }
  emit(report, clock);
  return norm_ok ? 0 : 1;
}

int run_demo(const CommonOpts& o) {
  StageClock clock{o.timings};
  Json runs = Json::array();

  const auto add_run = [&](const char* name, const EvaluationTable& table,
                           const SpectralDecomposition& decomp, bool prune) {
    PipelineOptions popts = pipeline_opts(o);
    popts.prune = prune;
    const PipelineResult res = normax::run_pipeline(table, decomp, popts);
    Json j;
    j["name"] = name;
    j["mode"] = mode_name(table.mode);
    j.update(pipeline_json(res));
    runs.push_back(j);
  };

  {
    const PointSet g = normax::from_spectrum({Cx(1, 0), Cx(3, 0)});
    const auto table =
        normax::build_basis_problem(g, normax::BasisKind::gmres(1), Field::Real);
    add_run("line_two_points", table,
            normax::canonical_decomposition(g, Field::Real), false);
  }
  {
    const PointSet g = normax::from_spectrum({Cx(-1, 0), Cx(0, 0), Cx(1, 0)});
    const auto table = normax::build_basis_problem(
        g, normax::BasisKind::chebyshev(2), Field::Real);
    add_run("parabola_three_points", table,
            normax::canonical_decomposition(g, Field::Real), false);
  }
  {
    const PointSet g = normax::from_spectrum(
        {Cx(1, 0), Cx(0, 1), Cx(-1, 0), Cx(0, -1)});
    const auto table = normax::build_basis_problem(
        g, normax::BasisKind::gmres(1), Field::Complex);
    add_run("fourth_roots", table,
            normax::canonical_decomposition(g, Field::Complex), true);
  }
  {
    // 2x2 rotation by a quarter turn: spectrum {i, -i}, conjugate columns.
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
    const PointSet g = normax::from_spectrum(d.lambdas);
    const auto table =
        normax::build_basis_problem(g, normax::BasisKind::gmres(1), Field::Real);
    add_run("quarter_turn_matrix", table, d, false);
  }
  clock.lap("runs");

  Json report;
  report["command"] = "demo";
  report["runs"] = runs;
  emit(report, clock);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimax approximation of matrix functions on spectra of "
               "normal matrices, with dual certificates and worst-case "
               "vectors"};
  app.require_subcommand(1);

  CommonOpts o;
  int code = 0;

  auto* c_solve = app.add_subcommand(
      "solve", "best uniform approximation on a finite point set");
  add_common(c_solve, o);
  c_solve->callback([&] { code = run_solve(o); });

  auto* c_certify = app.add_subcommand(
      "certify",
      "recover the dual certificate (for solved or supplied coefficients)");
  add_common(c_certify, o);
  c_certify->callback([&] { code = run_certify(o); });

  auto* c_worst = app.add_subcommand(
      "worstcase", "solve, certify, and build the worst-case unit vector");
  add_common(c_worst, o);
  c_worst->callback([&] { code = run_worstcase(o); });

  auto* c_verify = app.add_subcommand(
      "verify", "re-derive and check every claim end to end");
  add_common(c_verify, o);
  c_verify->callback([&] { code = run_verify(o); });

  auto* c_comm = app.add_subcommand(
      "commuting", "closest combination within a commuting normal family");
  add_common(c_comm, o);
  c_comm->callback([&] { code = run_commuting(o); });

  auto* c_demo =
      app.add_subcommand("demo", "run four built-in worked examples");
  c_demo->add_flag("--timings", o.timings,
                   "include wall-clock stage timings in the report");
  c_demo->callback([&] { code = run_demo(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int c = app.exit(e);
    return c == 0 ? 0 : 3;
  } catch (const normax::not_optimal_error& e) {
    std::fprintf(stderr, "not optimal: %s\n", e.what());
    return 1;
  } catch (const normax::convergence_error& e) {
    std::fprintf(stderr, "no convergence: %s\n", e.what());
    return 2;
  } catch (const normax::validation_error& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return code;
}
