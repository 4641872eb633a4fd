#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "helpers.hpp"
#include "normax/io.hpp"

using namespace normax;
namespace io = normax::io;
using io::Json;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "normax_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_input(const std::string& name, const Json& j) {
  const auto path = scratch_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << io::dump_fixed(j);
  return path.string();
}

std::string write_raw(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path.string();
}

// Run the installed binary with the given arguments; returns the exit code
// and captures stdout.
int run_cli(const std::string& args, std::string* out) {
  const char* bin = std::getenv("NORMAX_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "NORMAX_BIN must point at the CLI binary");
  const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string text;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), p)) > 0) text.append(buf, got);
  const int rc = pclose(p);
  if (out) *out = text;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Json line13_doc() {
  Json j;
  j["points"] = Json::array({Json::array({1.0, 0.0}), Json::array({3.0, 0.0})});
  j["kind"] = "gmres";
  j["k"] = 1;
  j["mode"] = "real";
  return j;
}

Json quarter_turn_matrix_doc(bool with_pairing) {
  const double s = 1.0 / std::sqrt(2.0);
  Json m;
  m["n"] = 2;
  m["Q"] = Json::array(
      {Json::array({Json::array({s, 0.0}), Json::array({s, 0.0})}),
       Json::array({Json::array({0.0, -s}), Json::array({0.0, s})})});
  m["lambdas"] = Json::array({Json::array({0.0, 1.0}), Json::array({0.0, -1.0})});
  m["mode"] = "real";
  if (with_pairing) m["pairing"] = Json::array({1, 0});
  Json doc;
  doc["matrix"] = m;
  doc["kind"] = "gmres";
  doc["k"] = 1;
  return doc;
}

}  // namespace

TEST_CASE("serialization uses a fixed layout, byte for byte") {
  Json j;
  j["name"] = "probe";
  j["count"] = 3;
  j["half"] = 0.5;
  j["items"] = Json::array({Json::array({1.0, -2.0})});
  j["flag"] = true;
  j["nothing"] = nullptr;
  j["empty"] = Json::object();
  const std::string expected =
      "{\n"
      "  \"name\": \"probe\",\n"
      "  \"count\": 3,\n"
      "  \"half\": 5.0000000000000000e-01,\n"
      "  \"items\": [\n"
      "    [\n"
      "      1.0000000000000000e+00,\n"
      "      -2.0000000000000000e+00\n"
      "    ]\n"
      "  ],\n"
      "  \"flag\": true,\n"
      "  \"nothing\": null,\n"
      "  \"empty\": {}\n"
      "}\n";
  CHECK(io::dump_fixed(j) == expected);
}

TEST_CASE("serialized floating-point numbers round-trip exactly") {
  for (double x : {1.0 / 3.0, 0.1, -1e300, 6.02e23, 1.0 / 7.0}) {
    Json j;
    j["x"] = x;
    CHECK(Json::parse(io::dump_fixed(j))["x"].get<double>() == x);
  }
}

TEST_CASE("non-finite numbers are refused at serialization time") {
  Json j;
  j["x"] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)io::dump_fixed(j), validation_error);
  j["x"] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS((void)io::dump_fixed(j), validation_error);
}

TEST_CASE("a named-basis problem document parses into a built table") {
  const auto in = io::parse_input_text(io::dump_fixed(line13_doc()));
  REQUIRE(in.table.has_value());
  CHECK(in.table->n() == 2);
  CHECK(in.table->k() == 1);
  CHECK(in.table->mode == Field::Real);
  CHECK(in.table->F[0] == Cx(1, 0));
  CHECK(in.table->Phi(1, 0) == Cx(3, 0));
  CHECK_FALSE(in.decomp.has_value());
  CHECK_FALSE(in.alpha.has_value());
}

TEST_CASE("explicit tables parse when their shape matches the points") {
  Json j;
  j["points"] = Json::array({Json::array({2.0, 0.0}), Json::array({-1.0, 0.0})});
  j["F"] = Json::array({Json::array({4.0, 0.0}), Json::array({1.0, 0.0})});
  j["Phi"] = Json::array(
      {Json::array({Json::array({2.0, 0.0})}),
       Json::array({Json::array({-1.0, 0.0})})});
  const auto in = io::parse_input_text(io::dump_fixed(j));
  REQUIRE(in.table.has_value());
  CHECK(in.table->mode == Field::Complex);  // the default field
  CHECK(in.table->F[0] == Cx(4, 0));

  j["F"] = Json::array({Json::array({4.0, 0.0})});  // one entry short
  CHECK_THROWS_AS((void)io::parse_input_text(io::dump_fixed(j)),
                  validation_error);
}

TEST_CASE("the field is chosen by override, document, matrix, default") {
  // Document mode wins over the matrix block's mode for the scalar problem.
  Json doc = quarter_turn_matrix_doc(true);
  doc["mode"] = "complex";
  const auto in = io::parse_input_text(io::dump_fixed(doc));
  REQUIRE(in.table.has_value());
  REQUIRE(in.decomp.has_value());
  CHECK(in.table->mode == Field::Complex);
  CHECK(in.decomp->mode == Field::Real);

  // An explicit override beats the document.
  const auto in2 = io::parse_input_text(io::dump_fixed(doc), Field::Real);
  CHECK(in2.table->mode == Field::Real);
}

TEST_CASE("a matrix block yields a validated decomposition") {
  const auto in = io::parse_input_text(io::dump_fixed(quarter_turn_matrix_doc(true)));
  REQUIRE(in.decomp.has_value());
  CHECK(in.decomp->n() == 2);
  CHECK(in.decomp->pairing == std::vector<std::size_t>{1, 0});
  REQUIRE(in.table.has_value());
  CHECK(in.table->mode == Field::Real);
  CHECK(in.table->gamma.points[0] == Cx(0, 1));

  // Without an explicit pairing the involution is derived from the columns.
  const auto derived =
      io::parse_input_text(io::dump_fixed(quarter_turn_matrix_doc(false)));
  REQUIRE(derived.decomp.has_value());
  CHECK(derived.decomp->pairing == std::vector<std::size_t>{1, 0});
}

TEST_CASE("given points must agree with the matrix spectrum") {
  Json doc = quarter_turn_matrix_doc(true);
  doc["points"] =
      Json::array({Json::array({0.0, 1.0}), Json::array({0.0, -1.0})});
  CHECK_NOTHROW((void)io::parse_input_text(io::dump_fixed(doc)));

  doc["points"] =
      Json::array({Json::array({1.0, 0.0}), Json::array({3.0, 0.0})});
  CHECK_THROWS_AS((void)io::parse_input_text(io::dump_fixed(doc)),
                  validation_error);
}

TEST_CASE("a family document builds the merged scalar problem") {
  Json fam;
  fam["U"] = Json::array(
      {Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 0.0})}),
       Json::array({Json::array({0.0, 0.0}), Json::array({1.0, 0.0})})});
  fam["diagonals"] = Json::array(
      {Json::array({Json::array({2.0, 0.0}), Json::array({2.0, 0.0})}),
       Json::array({Json::array({7.0, 0.0}), Json::array({7.0, 0.0})})});
  Json doc;
  doc["family"] = fam;
  const auto in = io::parse_input_text(io::dump_fixed(doc));
  REQUIRE(in.family.has_value());
  REQUIRE(in.table.has_value());
  REQUIRE(in.decomp.has_value());
  CHECK(in.table->n() == 1);  // both rows carry the same tuple
  CHECK(in.decomp->n() == 2);
  CHECK(in.table->F[0] == Cx(2, 0));

  // A family document fixes the tables itself.
  doc["kind"] = "gmres";
  CHECK_THROWS_AS((void)io::parse_input_text(io::dump_fixed(doc)),
                  validation_error);
  doc.erase("kind");
  doc["matrix"] = quarter_turn_matrix_doc(true)["matrix"];
  CHECK_THROWS_AS((void)io::parse_input_text(io::dump_fixed(doc)),
                  validation_error);
}

TEST_CASE("coefficient arrays ride along for certification") {
  Json doc = line13_doc();
  doc["alpha"] = Json::array({Json::array({0.5, 0.0})});
  const auto in = io::parse_input_text(io::dump_fixed(doc));
  REQUIRE(in.alpha.has_value());
  CHECK(in.alpha->alpha == Vec{Cx(0.5, 0.0)});
}

TEST_CASE("schema violations are rejected with clear errors") {
  CHECK_THROWS_AS((void)io::parse_input_text("this is not json"),
                  validation_error);
  CHECK_THROWS_AS((void)io::parse_input_text("[1, 2, 3]"), validation_error);

  Json j = line13_doc();
  j.erase("k");  // a named basis needs its order
  CHECK_THROWS_AS((void)io::parse_input_text(io::dump_fixed(j)),
                  validation_error);

  j = line13_doc();
  j["k"] = 0;
  CHECK_THROWS_AS((void)io::parse_input_text(io::dump_fixed(j)),
                  validation_error);

  j = line13_doc();
  j["F"] = Json::array({Json::array({1.0, 0.0}), Json::array({1.0, 0.0})});
  CHECK_THROWS_AS((void)io::parse_input_text(io::dump_fixed(j)),
                  validation_error);  // kind and tables are exclusive

  j = line13_doc();
  j["points"] = Json::array({Json::array({1.0}), Json::array({3.0, 0.0})});
  CHECK_THROWS_AS((void)io::parse_input_text(io::dump_fixed(j)),
                  validation_error);  // a point is a [re, im] pair

  Json doc = quarter_turn_matrix_doc(true);
  doc["matrix"]["pairing"] = Json::array({2, 0});
  CHECK_THROWS_AS((void)io::parse_input_text(io::dump_fixed(doc)),
                  validation_error);

  CHECK_THROWS_AS((void)io::parse_input_file("/nonexistent/input.json"),
                  validation_error);
}

TEST_CASE("solve reports the two-point optimum and exits cleanly") {
  const std::string path = write_input("line13.json", line13_doc());
  std::string out;
  const int rc = run_cli("solve " + path, &out);
  CHECK(rc == 0);
  const Json j = Json::parse(out);
  CHECK(j["command"] == "solve");
  CHECK(j["mode"] == "real");
  CHECK(j["solution"]["converged"] == true);
  CHECK(j["solution"]["delta"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(j["solution"]["alpha"][0][0].get<double>() ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK(j["solution"]["alpha"][0][1].get<double>() == 0.0);
}

TEST_CASE("identical invocations produce identical bytes") {
  const std::string path = write_input("line13_repeat.json", line13_doc());
  std::string a, b;
  CHECK(run_cli("solve " + path, &a) == 0);
  CHECK(run_cli("solve " + path, &b) == 0);
  CHECK(a == b);
  CHECK_FALSE(a.empty());
}

TEST_CASE("the demo reproduces all four worked examples") {
  std::string out;
  const int rc = run_cli("demo", &out);
  CHECK(rc == 0);
  const Json j = Json::parse(out);
  REQUIRE(j["runs"].size() == 4);
  const double expected[] = {0.5, 0.5, 1.0, 1.0};
  const char* names[] = {"line_two_points", "parabola_three_points",
                         "fourth_roots", "quarter_turn_matrix"};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(j["runs"][i]["name"] == names[i]);
    const double delta = j["runs"][i]["solution"]["delta"].get<double>();
    CHECK(delta == doctest::Approx(expected[i]).epsilon(1e-9));
    CHECK(j["runs"][i]["attained_check"].get<double>() ==
          doctest::Approx(delta).epsilon(1e-8));
  }
}

TEST_CASE("certify refutes supplied non-optimal coefficients") {
  Json doc = line13_doc();
  doc["alpha"] = Json::array({Json::array({0.0, 0.0})});
  const std::string path = write_input("refute.json", doc);
  std::string out;
  const int rc = run_cli("certify " + path, &out);
  CHECK(rc == 1);
  const Json j = Json::parse(out);
  CHECK(j["optimal"] == false);
  CHECK(j["best_condition_residual"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("certify accepts optimal supplied coefficients") {
  Json doc = line13_doc();
  doc["alpha"] = Json::array({Json::array({0.5, 0.0})});
  const std::string path = write_input("confirm.json", doc);
  std::string out;
  const int rc = run_cli("certify " + path, &out);
  CHECK(rc == 0);
  const Json j = Json::parse(out);
  CHECK(j["optimal"] == true);
  CHECK(j["certificate"]["omega"][0].get<double>() ==
        doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("a starved iteration budget exits with the convergence code") {
  const std::string path = write_input("line13_budget.json", line13_doc());
  std::string out;
  const int rc = run_cli("solve --max-iter 1 " + path, &out);
  CHECK(rc == 2);
  const Json j = Json::parse(out);
  CHECK(j["solution"]["converged"] == false);
}

TEST_CASE("unusable input exits with the schema code") {
  const std::string garbage = write_raw("garbage.json", "{{{ nope");
  CHECK(run_cli("solve " + garbage, nullptr) == 3);
  CHECK(run_cli("solve /nonexistent/file.json", nullptr) == 3);
  CHECK(run_cli("frobnicate", nullptr) == 3);
  CHECK(run_cli("solve", nullptr) == 3);  // missing required input
}

TEST_CASE("help is not an error") {
  CHECK(run_cli("--help", nullptr) == 0);
}

TEST_CASE("worstcase samples stay below the certified optimum") {
  const std::string path = write_input("line13_wc.json", line13_doc());
  std::string out;
  const int rc = run_cli("worstcase --trials 64 --seed 7 " + path, &out);
  CHECK(rc == 0);
  const Json j = Json::parse(out);
  const double delta = j["solution"]["delta"].get<double>();
  CHECK(delta == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(j["attained_check"].get<double>() ==
        doctest::Approx(delta).epsilon(1e-8));
  CHECK(j["sample"]["trials"] == 64);
  CHECK(j["sample"]["max_value"].get<double>() <= delta + 1e-8);
  // The certified worst vector is always included, so the sample is tight.
  CHECK(j["sample"]["max_value"].get<double>() >= delta - 1e-8);
}

TEST_CASE("commuting validates the optimum against the explicit matrices") {
  const double c = 1.0 / std::sqrt(2.0);
  Json fam;
  fam["U"] = Json::array(
      {Json::array({Json::array({c, 0.0}), Json::array({-c, 0.0})}),
       Json::array({Json::array({c, 0.0}), Json::array({c, 0.0})})});
  fam["diagonals"] = Json::array(
      {Json::array({Json::array({2.0, 0.0}), Json::array({-1.0, 0.0})}),
       Json::array({Json::array({1.0, 0.0}), Json::array({1.0, 0.0})})});
  fam["matrices"] = Json::array(
      {Json::array({Json::array({Json::array({0.5, 0.0}), Json::array({1.5, 0.0})}),
                    Json::array({Json::array({1.5, 0.0}), Json::array({0.5, 0.0})})}),
       Json::array({Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 0.0})}),
                    Json::array({Json::array({0.0, 0.0}), Json::array({1.0, 0.0})})})});
  Json doc;
  doc["family"] = fam;
  const std::string path = write_input("family.json", doc);
  std::string out;
  const int rc = run_cli("commuting " + path, &out);
  CHECK(rc == 0);
  const Json j = Json::parse(out);
  CHECK(j["labels"] == 2);
  CHECK(j["dimension"] == 2);
  CHECK(j["solution"]["delta"].get<double>() ==
        doctest::Approx(1.5).epsilon(1e-9));
  CHECK(j["matrix_check"]["matches_delta"] == true);
  CHECK(j["matrix_check"]["spectral_norm"].get<double>() ==
        doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("verify re-derives every claim and passes") {
  const std::string path = write_input("line13_verify.json", line13_doc());
  std::string out;
  const int rc = run_cli("verify " + path, &out);
  CHECK(rc == 0);
  const Json j = Json::parse(out);
  CHECK(j["pass"] == true);
  CHECK(j["delta"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  bool saw_attained = false;
  for (const auto& c : j["checks"]) {
    if (c["name"] == "worst_vector_attains_delta") {
      saw_attained = true;
      CHECK(c["pass"] == true);
    }
  }
  CHECK(saw_attained);
}

TEST_CASE("timings are opt-in and leave the default report untouched") {
  const std::string path = write_input("line13_t.json", line13_doc());
  std::string plain, timed;
  CHECK(run_cli("solve " + path, &plain) == 0);
  CHECK(run_cli("solve --timings " + path, &timed) == 0);
  CHECK(Json::parse(plain).contains("timings_ms") == false);
  CHECK(Json::parse(timed).contains("timings_ms") == true);
}
