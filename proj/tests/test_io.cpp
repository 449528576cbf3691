#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "hlab/cli.hpp"
#include "hlab/counterexample.hpp"
#include "hlab/problem_io.hpp"

using namespace hlab;

namespace {

const std::string kData = std::string(HLAB_SOURCE_DIR) + "/data";

std::string temp_path(const std::string& name) {
  return std::string(HLAB_SOURCE_DIR) + "/build/" + name;
}

// First nonnegative integer token lines of an SDPA file after the comments:
// m, nblocks, then the block structure.
std::vector<std::string> sdpa_payload_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '"' || line[0] == '*') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_CASE("bundled problem file parses to the reference problem") {
  const auto p = load_problem(kData + "/counterexample.json");
  const auto& ref = ReferenceData::instance();
  CHECK(p.num_vars == 2);
  CHECK(p.objective == ref.problem.objective);
  REQUIRE(p.constraints.size() == 1);
  CHECK(p.constraints[0] == ref.problem.constraints[0]);
}

TEST_CASE("float coefficients are rejected") {
  const std::string doc = R"({
    "variables": ["x1"],
    "objective": [{"exponents": [2], "coeff": 1.0}]
  })";
  CHECK_THROWS_AS(parse_problem_json(nlohmann::json::parse(doc)), ParseError);
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(parse_problem_json(nlohmann::json::parse("{}")), ParseError);
  const std::string dup = R"({
    "variables": ["x", "x"],
    "objective": []
  })";
  CHECK_THROWS_AS(parse_problem_json(nlohmann::json::parse(dup)), ParseError);
  const std::string shape = R"({
    "variables": ["x1", "x2"],
    "objective": [{"exponents": [1], "coeff": "1"}]
  })";
  CHECK_THROWS_AS(parse_problem_json(nlohmann::json::parse(shape)), ParseError);
}

TEST_CASE("certificate files parse and verify") {
  const auto p = load_problem(kData + "/counterexample.json");
  const auto las = load_certificate(kData + "/lasserre_certificate.json", p.num_vars);
  const auto sds = load_certificate(kData + "/sdsos_certificate.json", p.num_vars);
  CHECK(verify_identity(p, las).is_zero());
  CHECK(verify_identity(p, sds).is_zero());
}

TEST_CASE("native export round-trips bit-exactly") {
  const auto p = to_double(ReferenceData::instance().problem);
  for (auto kind : {Hierarchy::Lasserre, Hierarchy::Sdsos, Hierarchy::Dsos}) {
    const auto cp = build_relaxation(p, 2, kind);
    CHECK(parse_native(render_native(cp)) == cp);
  }
  const auto rcp = build_r_variant(p, 2, 1, Hierarchy::Sdsos);
  CHECK(parse_native(render_native(rcp)) == rcp);
}

TEST_CASE("sdpa export block structure") {
  const auto p = to_double(ReferenceData::instance().problem);

  // full hierarchy at order 1: blocks of size 3 and 1, no diagonal block
  {
    const auto text = render_sdpa(build_lasserre(p, 1));
    const auto lines = sdpa_payload_lines(text);
    REQUIRE(lines.size() >= 3);
    CHECK(lines[0] == "5");  // 6 moments minus the pinned y_0
    CHECK(lines[1] == "2");
    CHECK(lines[2] == "3 1");
  }

  // SDSOS at order 1: 3 SOC blocks plus one diagonal block of 4 rows
  {
    const auto text = render_sdpa(build_sdsos(p, 1));
    const auto lines = sdpa_payload_lines(text);
    CHECK(lines[1] == "4");
    CHECK(lines[2] == "2 2 2 -4");
  }

  // pure LP: only a diagonal block
  {
    PolyProblem<double> q;
    q.num_vars = 1;
    Polynomial<double> f(1);
    f.add_term(MultiIndex{2}, 1.0);
    q.objective = f;
    const auto text = render_sdpa(build_dsos(q, 1));
    const auto lines = sdpa_payload_lines(text);
    CHECK(lines[1] == "1");
    CHECK(lines[2].substr(0, 1) == "-");
  }

  // r-variant: the extra normalization row becomes an inequality pair
  {
    const auto text = render_sdpa(build_r_variant(p, 2, 1, Hierarchy::Sdsos));
    CHECK(text.find("equality (>=)") != std::string::npos);
    CHECK(text.find("equality (<=)") != std::string::npos);
  }

  // provenance comments
  {
    const auto text = render_sdpa(build_sdsos(p, 1));
    CHECK(text.find("pair (1,0),(0,1)") != std::string::npos);
    CHECK(text.find("diag (0,0) of moment matrix") != std::string::npos);
  }
}

namespace {

// Minimal SDPA sparse reader for the round-trip test: rebuilds a ConicProgram
// from the exported text (comments dropped, constants folded back from F_0).
struct SdpaDoc {
  ConicProgram program;
  double objective_constant = 0.0;
};

SdpaDoc parse_sdpa_for_test(const std::string& text) {
  SdpaDoc doc;
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("\"objective constant", 0) == 0)
        doc.objective_constant = std::stod(line.substr(line.find(':') + 1));
      if (line.empty() || line[0] == '"' || line[0] == '*') continue;
      lines.push_back(line);
    }
  }
  REQUIRE(lines.size() >= 4);
  const int m = std::stoi(lines[0]);
  const int nblocks = std::stoi(lines[1]);

  std::vector<int> sizes;
  {
    std::istringstream in(lines[2]);
    int s;
    while (in >> s) sizes.push_back(s);
  }
  REQUIRE(static_cast<int>(sizes.size()) == nblocks);

  ConicProgram& cp = doc.program;
  cp.num_y = m;
  cp.objective.assign(static_cast<std::size_t>(m), 0.0);
  {
    std::istringstream in(lines[3]);
    for (int i = 0; i < m; ++i) in >> cp.objective[static_cast<std::size_t>(i)];
  }
  for (int s : sizes) {
    ConeBlock b;
    if (s < 0) {
      b.kind = BlockKind::LIN;
      b.dim = -s;
      b.row_notes.assign(static_cast<std::size_t>(-s), "imported");
    } else {
      b.kind = BlockKind::PSD;
      b.dim = s;
    }
    cp.blocks.push_back(std::move(b));
  }
  for (std::size_t l = 4; l < lines.size(); ++l) {
    std::istringstream in(lines[l]);
    int mat, blk, i, j;
    double v;
    REQUIRE((in >> mat >> blk >> i >> j >> v));
    // X = sum x_i F_i - F_0, so F_0 entries carry a negated constant.
    cp.blocks[static_cast<std::size_t>(blk - 1)].entries.push_back(
        {i - 1, j - 1, mat == 0 ? kConstTerm : mat - 1, mat == 0 ? -v : v});
  }
  cp.validate();
  return doc;
}

}  // namespace

TEST_CASE("sdpa export solves to the same optimum after re-parsing") {
  const auto p = to_double(ReferenceData::instance().problem);
  for (int d = 1; d <= 2; ++d)
    for (auto kind : {Hierarchy::Lasserre, Hierarchy::Sdsos, Hierarchy::Dsos}) {
      const auto cp = build_relaxation(p, d, kind);
      const auto direct = solve(cp);
      REQUIRE(direct.status == SolveStatus::Optimal);

      const auto doc = parse_sdpa_for_test(render_sdpa(cp));
      const auto via_sdpa = solve(doc.program);
      REQUIRE(via_sdpa.status == SolveStatus::Optimal);
      CHECK(via_sdpa.primal_value + doc.objective_constant ==
            doctest::Approx(direct.primal_value).epsilon(1e-6));
    }
}

TEST_CASE("cli end to end") {
  const std::string problem = kData + "/counterexample.json";

  SUBCASE("relax writes an SDPA file") {
    const std::string out = temp_path("cli_relax.dat-s");
    CHECK(run_cli({"relax", problem, "--kind", "lasserre", "--order", "1", "-o", out}) == kExitOk);
    const auto lines = sdpa_payload_lines(read_file(out));
    CHECK(lines[2] == "3 1");
  }

  SUBCASE("relax native round-trip") {
    const std::string out = temp_path("cli_relax.json");
    CHECK(run_cli({"relax", problem, "--kind", "sdsos", "--order", "2", "--export", "native",
                   "-o", out}) == kExitOk);
    const auto cp = parse_native(read_file(out));
    CHECK(cp == build_sdsos(to_double(ReferenceData::instance().problem), 2));
  }

  SUBCASE("solve succeeds on the bundled problem") {
    CHECK(run_cli({"solve", problem, "--kind", "sdsos", "--order", "2", "--json"}) == kExitOk);
  }

  SUBCASE("inadmissible order exits 3") {
    CHECK(run_cli({"relax", problem, "--kind", "lasserre", "--order", "0"}) == kExitBadOrder);
    CHECK(run_cli({"solve", problem, "--kind", "sdsos", "--order", "2", "--r", "3"}) ==
          kExitBadOrder);
  }

  SUBCASE("parse failures exit 2") {
    const std::string bad = temp_path("cli_bad.json");
    write_file(bad, "{\"variables\": [\"x1\"]}");
    CHECK(run_cli({"relax", bad, "--kind", "lasserre", "--order", "1"}) == kExitParseError);
    CHECK(run_cli({"verify", bad, problem}) == kExitParseError);
  }

  SUBCASE("verify accepts the bundled certificates") {
    CHECK(run_cli({"verify", kData + "/lasserre_certificate.json", problem}) == kExitOk);
    CHECK(run_cli({"verify", kData + "/sdsos_certificate.json", problem}) == kExitOk);
  }

  SUBCASE("verify treats a multiplier-count mismatch as an input error") {
    const std::string short_cert = temp_path("cli_short_cert.json");
    auto doc = nlohmann::json::parse(read_file(kData + "/lasserre_certificate.json"));
    doc["sigmas"].erase(1);
    write_file(short_cert, doc.dump());
    CHECK(run_cli({"verify", short_cert, problem}) == kExitParseError);
  }

  SUBCASE("verify rejects a perturbed certificate") {
    const std::string bad_cert = temp_path("cli_bad_cert.json");
    auto doc = nlohmann::json::parse(read_file(kData + "/lasserre_certificate.json"));
    doc["lambda"] = "2/5";
    write_file(bad_cert, doc.dump());
    CHECK(run_cli({"verify", bad_cert, problem}) == kExitCheckFailed);
  }

  SUBCASE("reproduce single order") {
    CHECK(run_cli({"reproduce", "--orders", "1", "--json"}) == kExitOk);
  }

  SUBCASE("HIERARCHY_LAB_TOL feeds the solver tolerance") {
    setenv("HIERARCHY_LAB_TOL", "not-a-number", 1);
    CHECK(run_cli({"solve", problem, "--kind", "sdsos", "--order", "1"}) != kExitOk);
    setenv("HIERARCHY_LAB_TOL", "1e-6", 1);
    CHECK(run_cli({"solve", problem, "--kind", "sdsos", "--order", "1"}) == kExitOk);
    unsetenv("HIERARCHY_LAB_TOL");
  }
}

TEST_CASE("reproduce report json shape") {
  const auto report = reproduce({1}, 1e-6);
  const auto j = reproduce_report_json(report);
  CHECK(j.at("command") == "reproduce");
  CHECK(j.at("all_pass").is_boolean());
  CHECK(j.at("cells").is_array());
  CHECK(!j.at("cells").empty());
  for (const auto& cell : j.at("cells")) {
    CHECK(cell.contains("name"));
    CHECK(cell.contains("value"));
    CHECK(cell.contains("reference_exact"));
    CHECK(cell.contains("pass"));
  }
  CHECK(j.at("exact_checks").is_array());
}

namespace {

// Validator for the subset of JSON Schema the shipped schemas use:
// type (string or list), required, properties, items, enum, minItems, minimum.
bool matches_schema(const nlohmann::json& value, const nlohmann::json& schema, std::string* why) {
  auto type_ok = [&](const std::string& t) {
    if (t == "object") return value.is_object();
    if (t == "array") return value.is_array();
    if (t == "string") return value.is_string();
    if (t == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (t == "number") return value.is_number();
    if (t == "boolean") return value.is_boolean();
    if (t == "null") return value.is_null();
    return false;
  };
  if (schema.contains("type")) {
    const auto& t = schema.at("type");
    bool ok = false;
    if (t.is_string()) ok = type_ok(t.get<std::string>());
    else
      for (const auto& opt : t) ok = ok || type_ok(opt.get<std::string>());
    if (!ok) {
      *why = "type mismatch at " + value.dump().substr(0, 60);
      return false;
    }
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& opt : schema.at("enum")) ok = ok || opt == value;
    if (!ok) {
      *why = "enum mismatch: " + value.dump();
      return false;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema.at("required"))
        if (!value.contains(key.get<std::string>())) {
          *why = "missing key " + key.get<std::string>();
          return false;
        }
    if (schema.contains("properties"))
      for (const auto& [key, sub] : schema.at("properties").items())
        if (value.contains(key) && !matches_schema(value.at(key), sub, why)) return false;
  }
  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema.at("minItems").get<std::size_t>()) {
      *why = "too few items";
      return false;
    }
    if (schema.contains("items"))
      for (const auto& element : value)
        if (!matches_schema(element, schema.at("items"), why)) return false;
  }
  if (value.is_number() && schema.contains("minimum") &&
      value.get<double>() < schema.at("minimum").get<double>()) {
    *why = "below minimum: " + value.dump();
    return false;
  }
  return true;
}

void check_schema(const nlohmann::json& value, const std::string& schema_file) {
  const auto schema =
      nlohmann::json::parse(read_file(std::string(HLAB_SOURCE_DIR) + "/docs/" + schema_file));
  std::string why;
  const bool ok = matches_schema(value, schema, &why);
  INFO(schema_file, ": ", why);
  CHECK(ok);
}

}  // namespace

TEST_CASE("documents validate against the shipped schemas") {
  check_schema(nlohmann::json::parse(read_file(kData + "/counterexample.json")),
               "problem.schema.json");
  check_schema(nlohmann::json::parse(read_file(kData + "/lasserre_certificate.json")),
               "certificate.schema.json");
  check_schema(nlohmann::json::parse(read_file(kData + "/sdsos_certificate.json")),
               "certificate.schema.json");

  const auto p = to_double(ReferenceData::instance().problem);
  const auto cp = build_lasserre(p, 1);
  const auto res = solve(cp);
  const auto point = extract_minimizer(moment_matrix(solution_moments(cp, res), 1));
  std::optional<double> lam;
  if (point) lam = kkt_multiplier_from_dual(cp, res, *point);
  check_schema(solve_report_json(cp, res, Hierarchy::Lasserre, 1, 0, point, lam),
               "solve_report.schema.json");

  check_schema(reproduce_report_json(reproduce({1, 2}, 1e-6)), "reproduce_report.schema.json");
}
