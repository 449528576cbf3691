#include "hlab/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hlab {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

namespace {

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON in " + what);
  return j;
}

QSqrt2 coeff_from_json(const json& j) {
  if (!j.is_string())
    throw ParseError("coefficients must be exact strings like \"3/2\" or \"1-2*sqrt2\"; "
                     "floating-point coefficients are rejected");
  return parse_qsqrt2(j.get<std::string>());
}

Polynomial<QSqrt2> poly_from_terms(const json& terms, int num_vars, const std::string& what) {
  if (!terms.is_array()) throw ParseError(what + " must be an array of terms");
  Polynomial<QSqrt2> p(num_vars);
  for (const auto& t : terms) {
    if (!t.is_object() || !t.contains("exponents") || !t.contains("coeff"))
      throw ParseError("each term needs \"exponents\" and \"coeff\"");
    const auto& ex = t.at("exponents");
    if (!ex.is_array() || static_cast<int>(ex.size()) != num_vars)
      throw ParseError("exponent vector size must match the variable count");
    std::vector<int> e;
    for (const auto& v : ex) {
      if (!v.is_number_integer() || v.get<int>() < 0)
        throw ParseError("exponents must be nonnegative integers");
      e.push_back(v.get<int>());
    }
    p.add_term(MultiIndex(std::move(e)), coeff_from_json(t.at("coeff")));
  }
  return p;
}

}  // namespace

PolyProblem<QSqrt2> parse_problem_json(const json& j) {
  if (!j.is_object()) throw ParseError("problem document must be a JSON object");
  if (!j.contains("variables") || !j.at("variables").is_array() || j.at("variables").empty())
    throw ParseError("problem needs a nonempty \"variables\" list");
  std::set<std::string> names;
  for (const auto& v : j.at("variables")) {
    if (!v.is_string() || !names.insert(v.get<std::string>()).second)
      throw ParseError("variable names must be distinct strings");
  }
  const int n = static_cast<int>(names.size());

  PolyProblem<QSqrt2> p;
  p.num_vars = n;
  if (!j.contains("objective")) throw ParseError("problem needs an \"objective\"");
  p.objective = poly_from_terms(j.at("objective"), n, "objective");
  if (j.contains("constraints")) {
    if (!j.at("constraints").is_array()) throw ParseError("\"constraints\" must be an array");
    for (const auto& c : j.at("constraints"))
      p.constraints.push_back(poly_from_terms(c, n, "constraint"));
  }
  return p;
}

PolyProblem<QSqrt2> load_problem(const std::string& path) {
  return parse_problem_json(parse_json(read_file(path), path));
}

Certificate parse_certificate_json(const json& j, int num_vars) {
  if (!j.is_object() || !j.contains("lambda") || !j.contains("sigmas"))
    throw ParseError("certificate needs \"lambda\" and \"sigmas\"");
  Certificate cert;
  cert.lambda = coeff_from_json(j.at("lambda"));
  cert.r = j.value("r", 0);
  if (cert.r < 0) throw ParseError("certificate \"r\" must be nonnegative");
  if (!j.at("sigmas").is_array()) throw ParseError("\"sigmas\" must be an array");
  for (const auto& s : j.at("sigmas")) {
    if (!s.is_object() || !s.contains("squares") || !s.at("squares").is_array())
      throw ParseError("each sigma needs a \"squares\" array");
    SquareDecomposition sd;
    for (const auto& q : s.at("squares")) {
      if (!q.is_object() || !q.contains("weight") || !q.contains("poly"))
        throw ParseError("each square needs \"weight\" and \"poly\"");
      const QSqrt2 w = coeff_from_json(q.at("weight"));
      if (w.sign() < 0) throw ParseError("square weights must be nonnegative");
      if (!q.at("poly").is_string()) throw ParseError("\"poly\" must be a polynomial string");
      sd.squares.emplace_back(w, parse_polynomial(q.at("poly").get<std::string>(), num_vars));
    }
    cert.sigmas.push_back(std::move(sd));
  }
  return cert;
}

Certificate load_certificate(const std::string& path, int num_vars) {
  return parse_certificate_json(parse_json(read_file(path), path), num_vars);
}

namespace {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string block_title(const ConeBlock& b) {
  std::string src = b.source == kSourceMoment ? "moment matrix"
                    : b.source == kSourceCustom
                        ? "custom"
                        : "localizing matrix g" + std::to_string(b.source + 1);
  std::string title = std::string(to_string(b.kind)) + " dim " + std::to_string(b.dim) + ", " + src;
  if (b.kind == BlockKind::SOC2x2 && b.basis.size() == 2)
    title += ", pair " + to_string(b.basis[0]) + "," + to_string(b.basis[1]);
  return title;
}

}  // namespace

std::string render_sdpa(const ConicProgram& cp) {
  cp.validate();

  // Equalities pinning a single variable are eliminated by substitution; the
  // rest become opposing inequality pairs in the diagonal block.
  std::map<int, double> pinned;
  std::vector<const EqualityRow*> leftover;
  for (const auto& eq : cp.equalities) {
    if (eq.coeffs.size() == 1 && eq.coeffs[0].second != 0.0 && !pinned.count(eq.coeffs[0].first))
      pinned[eq.coeffs[0].first] = eq.rhs / eq.coeffs[0].second;
    else
      leftover.push_back(&eq);
  }

  std::map<int, int> var_of_y;  // y index -> 1-based SDPA variable
  for (int yi = 0; yi < cp.num_y; ++yi)
    if (!pinned.count(yi)) var_of_y[yi] = static_cast<int>(var_of_y.size()) + 1;
  const int m = static_cast<int>(var_of_y.size());

  // One linear row: pinned entries fold into the constant.
  struct DiagRow {
    std::map<int, double> coeffs;  // SDPA variable -> coefficient
    double constant = 0.0;
    std::string note;
  };
  std::vector<DiagRow> diag_rows;

  std::ostringstream head, body;
  head << "\"hierarchy-lab conic export (SDPA sparse)\n";
  head << "\"y_0 = 1 eliminated by substitution; objective constant recorded below\n";

  std::vector<int> block_sizes;
  int block_no = 0;

  for (const auto& b : cp.blocks) {
    if (b.kind == BlockKind::LIN) {
      for (int r = 0; r < b.dim; ++r) {
        DiagRow row;
        row.note = b.row_notes.empty() ? block_title(b) : b.row_notes[static_cast<std::size_t>(r)];
        for (const auto& e : b.entries) {
          if (e.row != r) continue;
          if (e.y_index == kConstTerm)
            row.constant += e.coeff;
          else if (auto it = pinned.find(e.y_index); it != pinned.end())
            row.constant += e.coeff * it->second;
          else
            row.coeffs[var_of_y.at(e.y_index)] += e.coeff;
        }
        diag_rows.push_back(std::move(row));
      }
      continue;
    }
    ++block_no;
    block_sizes.push_back(b.dim);
    head << "\"block " << block_no << ": " << block_title(b) << "\n";
    for (const auto& e : b.entries) {
      double constant = 0.0;
      int var = 0;
      if (e.y_index == kConstTerm) {
        constant = e.coeff;
      } else if (auto it = pinned.find(e.y_index); it != pinned.end()) {
        constant = e.coeff * it->second;
      } else {
        var = var_of_y.at(e.y_index);
      }
      if (var > 0) {
        body << var << " " << block_no << " " << e.row + 1 << " " << e.col + 1 << " "
             << format_value(e.coeff) << "\n";
      } else if (constant != 0.0) {
        // X = sum x_i F_i - F_0, so constants enter F_0 negated.
        body << 0 << " " << block_no << " " << e.row + 1 << " " << e.col + 1 << " "
             << format_value(-constant) << "\n";
      }
    }
  }

  for (const auto* eq : leftover) {
    DiagRow ge, le;
    ge.note = "equality (>=): " + eq->note;
    le.note = "equality (<=): " + eq->note;
    ge.constant = -eq->rhs;
    le.constant = eq->rhs;
    for (const auto& [yi, v] : eq->coeffs) {
      if (auto it = pinned.find(yi); it != pinned.end()) {
        ge.constant += v * it->second;
        le.constant -= v * it->second;
      } else {
        ge.coeffs[var_of_y.at(yi)] += v;
        le.coeffs[var_of_y.at(yi)] -= v;
      }
    }
    diag_rows.push_back(std::move(ge));
    diag_rows.push_back(std::move(le));
  }

  if (!diag_rows.empty()) {
    ++block_no;
    block_sizes.push_back(-static_cast<int>(diag_rows.size()));
    head << "\"block " << block_no << ": diagonal, " << diag_rows.size() << " linear rows\n";
    for (std::size_t r = 0; r < diag_rows.size(); ++r)
      head << "\"  row " << r + 1 << ": " << diag_rows[r].note << "\n";
    for (std::size_t r = 0; r < diag_rows.size(); ++r) {
      const auto& row = diag_rows[r];
      for (const auto& [var, v] : row.coeffs)
        if (v != 0.0)
          body << var << " " << block_no << " " << r + 1 << " " << r + 1 << " " << format_value(v)
               << "\n";
      if (row.constant != 0.0)
        body << 0 << " " << block_no << " " << r + 1 << " " << r + 1 << " "
             << format_value(-row.constant) << "\n";
    }
  }

  double obj_constant = 0.0;
  std::vector<double> obj(static_cast<std::size_t>(m), 0.0);
  for (int yi = 0; yi < cp.num_y; ++yi) {
    const double c = cp.objective[static_cast<std::size_t>(yi)];
    if (c == 0.0) continue;
    if (auto it = pinned.find(yi); it != pinned.end())
      obj_constant += c * it->second;
    else
      obj[static_cast<std::size_t>(var_of_y.at(yi) - 1)] = c;
  }
  head << "\"objective constant (add to reported optimum): " << format_value(obj_constant) << "\n";

  std::ostringstream out;
  out << head.str();
  out << m << "\n";
  out << block_sizes.size() << "\n";
  for (std::size_t i = 0; i < block_sizes.size(); ++i)
    out << block_sizes[i] << (i + 1 < block_sizes.size() ? " " : "\n");
  if (block_sizes.empty()) out << "\n";
  for (int i = 0; i < m; ++i)
    out << format_value(obj[static_cast<std::size_t>(i)]) << (i + 1 < m ? " " : "\n");
  if (m == 0) out << "\n";
  out << body.str();
  return out.str();
}

namespace {

json labels_json(const std::vector<MultiIndex>& labels) {
  json arr = json::array();
  for (const auto& a : labels) arr.push_back(a.exponents);
  return arr;
}

std::vector<MultiIndex> labels_from_json(const json& arr) {
  std::vector<MultiIndex> out;
  for (const auto& e : arr) out.push_back(MultiIndex(e.get<std::vector<int>>()));
  return out;
}

}  // namespace

std::string render_native(const ConicProgram& cp) {
  json j;
  j["format"] = "hierarchy-lab-conic";
  j["version"] = 1;
  j["num_vars"] = cp.num_vars;
  j["num_y"] = cp.num_y;
  j["y_labels"] = labels_json(cp.y_labels);
  j["objective"] = cp.objective;
  j["equalities"] = json::array();
  for (const auto& eq : cp.equalities) {
    json row;
    row["coeffs"] = json::array();
    for (const auto& [yi, v] : eq.coeffs) row["coeffs"].push_back({yi, v});
    row["rhs"] = eq.rhs;
    row["note"] = eq.note;
    j["equalities"].push_back(std::move(row));
  }
  j["blocks"] = json::array();
  for (const auto& b : cp.blocks) {
    json blk;
    blk["kind"] = to_string(b.kind);
    blk["dim"] = b.dim;
    blk["source"] = b.source;
    blk["entries"] = json::array();
    for (const auto& e : b.entries) blk["entries"].push_back({e.row, e.col, e.y_index, e.coeff});
    blk["basis"] = labels_json(b.basis);
    blk["row_notes"] = b.row_notes;
    j["blocks"].push_back(std::move(blk));
  }
  return j.dump(2) + "\n";
}

ConicProgram parse_native(const std::string& text) {
  const json j = parse_json(text, "native conic program");
  if (!j.is_object() || j.value("format", "") != "hierarchy-lab-conic")
    throw ParseError("not a hierarchy-lab conic program");
  ConicProgram cp;
  cp.num_vars = j.at("num_vars").get<int>();
  cp.num_y = j.at("num_y").get<int>();
  cp.y_labels = labels_from_json(j.at("y_labels"));
  cp.objective = j.at("objective").get<std::vector<double>>();
  for (const auto& row : j.at("equalities")) {
    EqualityRow eq;
    for (const auto& pair : row.at("coeffs"))
      eq.coeffs.emplace_back(pair.at(0).get<int>(), pair.at(1).get<double>());
    eq.rhs = row.at("rhs").get<double>();
    eq.note = row.value("note", "");
    cp.equalities.push_back(std::move(eq));
  }
  for (const auto& blk : j.at("blocks")) {
    ConeBlock b;
    const std::string kind = blk.at("kind").get<std::string>();
    if (kind == "PSD")
      b.kind = BlockKind::PSD;
    else if (kind == "SOC2x2")
      b.kind = BlockKind::SOC2x2;
    else if (kind == "LIN")
      b.kind = BlockKind::LIN;
    else
      throw ParseError("unknown block kind '" + kind + "'");
    b.dim = blk.at("dim").get<int>();
    b.source = blk.at("source").get<int>();
    for (const auto& e : blk.at("entries"))
      b.entries.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(),
                           e.at(3).get<double>()});
    b.basis = labels_from_json(blk.at("basis"));
    b.row_notes = blk.at("row_notes").get<std::vector<std::string>>();
    cp.blocks.push_back(std::move(b));
  }
  cp.validate();
  return cp;
}

json solve_report_json(const ConicProgram& cp, const SolveResult& res, Hierarchy kind, int order,
                       int r, const std::optional<Eigen::VectorXd>& minimizer,
                       std::optional<double> multiplier) {
  json j;
  j["command"] = "solve";
  j["kind"] = to_string(kind);
  j["order"] = order;
  j["r"] = r;
  j["status"] = to_string(res.status);
  j["bound"] = res.dual_value;
  j["primal_value"] = res.primal_value;
  j["dual_value"] = res.dual_value;
  j["iterations"] = res.iterations;
  j["residuals"] = {{"primal", res.residuals.primal},
                    {"dual", res.residuals.dual},
                    {"gap", res.residuals.gap}};
  if (minimizer)
    j["minimizer"] = std::vector<double>(minimizer->data(), minimizer->data() + minimizer->size());
  else
    j["minimizer"] = nullptr;
  if (multiplier)
    j["kkt_multiplier"] = *multiplier;
  else
    j["kkt_multiplier"] = nullptr;
  json moments = json::array();
  for (std::size_t i = 0; i < cp.y_labels.size(); ++i)
    moments.push_back({{"alpha", cp.y_labels[i].exponents},
                       {"value", res.y[static_cast<Eigen::Index>(i)]}});
  j["moments"] = std::move(moments);
  return j;
}

json reproduce_report_json(const ReproduceReport& report) {
  json j;
  j["command"] = "reproduce";
  j["orders"] = report.orders;
  j["tolerance"] = report.tolerance;
  j["all_pass"] = report.all_pass();
  j["cells"] = json::array();
  for (const auto& c : report.cells) {
    json cell;
    cell["name"] = c.name;
    cell["value"] = c.value;
    if (c.reference)
      cell["reference"] = *c.reference;
    else
      cell["reference"] = nullptr;
    cell["reference_exact"] = c.reference_exact;
    cell["comparison"] = c.comparison;
    cell["tolerance"] = c.tolerance;
    cell["pass"] = c.pass;
    cell["status"] = c.status;
    cell["note"] = c.note;
    j["cells"].push_back(std::move(cell));
  }
  j["exact_checks"] = json::array();
  for (const auto& c : report.exact_checks)
    j["exact_checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"note", c.note}});
  return j;
}

}  // namespace hlab
