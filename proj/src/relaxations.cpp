#include "hlab/relaxations.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hlab/moments.hpp"

namespace hlab {

const char* to_string(Hierarchy h) {
  switch (h) {
    case Hierarchy::Lasserre: return "lasserre";
    case Hierarchy::Sdsos: return "sdsos";
    case Hierarchy::Dsos: return "dsos";
  }
  return "?";
}

PolyProblem<double> to_double(const PolyProblem<QSqrt2>& p) {
  PolyProblem<double> r;
  r.num_vars = p.num_vars;
  r.objective = to_double(p.objective);
  for (const auto& g : p.constraints) r.constraints.push_back(to_double(g));
  return r;
}

int min_order(const PolyProblem<double>& p, int r) {
  const int deg_f = p.objective.degree().value_or(0);
  int d = (deg_f + 2 * r + 1) / 2;
  for (const auto& g : p.constraints) d = std::max(d, degree_bound(g));
  return d;
}

namespace {

// Affine map of one base matrix (moment or localizing): for each upper-triangle
// cell a sorted list of (y_index, coefficient) contributions.
struct SymbolicMatrix {
  int dim = 0;
  int source = kSourceCustom;
  std::vector<MultiIndex> basis;
  std::vector<std::vector<std::pair<int, double>>> cells;  // index r * dim + c, r <= c

  const std::vector<std::pair<int, double>>& cell(int r, int c) const {
    return cells[static_cast<std::size_t>(r * dim + c)];
  }
};

using IndexMap = std::map<MultiIndex, int, GradedLex>;

SymbolicMatrix make_moment_block(int n, int d, const IndexMap& y_index) {
  SymbolicMatrix m;
  m.source = kSourceMoment;
  m.basis = monomials_up_to(n, d);
  m.dim = static_cast<int>(m.basis.size());
  m.cells.resize(static_cast<std::size_t>(m.dim) * static_cast<std::size_t>(m.dim));
  for (int r = 0; r < m.dim; ++r)
    for (int c = r; c < m.dim; ++c) {
      const MultiIndex sum = m.basis[static_cast<std::size_t>(r)] + m.basis[static_cast<std::size_t>(c)];
      m.cells[static_cast<std::size_t>(r * m.dim + c)] = {{y_index.at(sum), 1.0}};
    }
  return m;
}

SymbolicMatrix make_localizing_block(const Polynomial<double>& g, int constraint, int n, int order,
                                     const IndexMap& y_index) {
  SymbolicMatrix m;
  m.source = constraint;
  m.basis = monomials_up_to(n, order);
  m.dim = static_cast<int>(m.basis.size());
  m.cells.resize(static_cast<std::size_t>(m.dim) * static_cast<std::size_t>(m.dim));
  for (int r = 0; r < m.dim; ++r)
    for (int c = r; c < m.dim; ++c) {
      std::map<int, double> combined;
      const MultiIndex ab = m.basis[static_cast<std::size_t>(r)] + m.basis[static_cast<std::size_t>(c)];
      for (const auto& [gamma, coeff] : g.terms()) combined[y_index.at(ab + gamma)] += coeff;
      auto& cell = m.cells[static_cast<std::size_t>(r * m.dim + c)];
      for (const auto& [y, v] : combined)
        if (v != 0.0) cell.emplace_back(y, v);
    }
  return m;
}

void append_cell(std::vector<BlockEntry>& entries, int row, int col,
                 const std::vector<std::pair<int, double>>& cell, double scale = 1.0) {
  for (const auto& [y, v] : cell) entries.push_back({row, col, y, scale * v});
}

// Merged linear row: sum of scaled cells, combined per y index.
std::vector<std::pair<int, double>> merge_cells(
    std::initializer_list<std::pair<const std::vector<std::pair<int, double>>*, double>> parts) {
  std::map<int, double> combined;
  for (const auto& [cell, scale] : parts)
    for (const auto& [y, v] : *cell) combined[y] += scale * v;
  std::vector<std::pair<int, double>> row;
  for (const auto& [y, v] : combined)
    if (v != 0.0) row.emplace_back(y, v);
  return row;
}

// Pending linear inequalities for one source matrix, deduplicated program-wide
// before becoming a LIN block.
struct LinRow {
  std::vector<std::pair<int, double>> coeffs;
  std::string note;
};

ConeBlock lin_block(std::vector<LinRow> rows, int source) {
  ConeBlock b;
  b.kind = BlockKind::LIN;
  b.source = source;
  b.dim = static_cast<int>(rows.size());
  for (int r = 0; r < b.dim; ++r) {
    for (const auto& [y, v] : rows[static_cast<std::size_t>(r)].coeffs) b.entries.push_back({r, r, y, v});
    b.row_notes.push_back(std::move(rows[static_cast<std::size_t>(r)].note));
  }
  return b;
}

std::string pair_note(const SymbolicMatrix& m, int i, int j) {
  return "pair " + to_string(m.basis[static_cast<std::size_t>(i)]) + "," +
         to_string(m.basis[static_cast<std::size_t>(j)]) + " of " +
         (m.source == kSourceMoment ? std::string("moment matrix")
                                    : "localizing matrix g" + std::to_string(m.source + 1));
}

std::string diag_note(const SymbolicMatrix& m, int i) {
  return "diag " + to_string(m.basis[static_cast<std::size_t>(i)]) + " of " +
         (m.source == kSourceMoment ? std::string("moment matrix")
                                    : "localizing matrix g" + std::to_string(m.source + 1));
}

}  // namespace

ConicProgram build_relaxation(const PolyProblem<double>& p, int d, Hierarchy kind, int r) {
  if (r < 0) throw Error("premultiplication power must be nonnegative");
  const int n = p.num_vars;
  if (n < 1) throw DimensionError("polynomial problem needs at least one variable");
  if (p.objective.num_vars() != n) throw DimensionError("objective dimension mismatch");
  for (const auto& g : p.constraints)
    if (g.num_vars() != n) throw DimensionError("constraint dimension mismatch");

  std::vector<int> ks;
  for (const auto& g : p.constraints) ks.push_back(degree_bound(g));
  if (d < min_order(p, r))
    throw OrderTooSmall("order " + std::to_string(d) + " is below the admissible minimum " +
                        std::to_string(min_order(p, r)));

  ConicProgram cp;
  cp.num_vars = n;
  cp.y_labels = monomials_up_to(n, 2 * d);
  cp.num_y = static_cast<int>(cp.y_labels.size());
  cp.objective.assign(static_cast<std::size_t>(cp.num_y), 0.0);

  IndexMap y_index;
  for (int i = 0; i < cp.num_y; ++i) y_index.emplace(cp.y_labels[static_cast<std::size_t>(i)], i);

  Polynomial<double> objective = p.objective;
  if (r >= 1) objective = pow(squared_norm_poly<double>(n), r) * p.objective;
  for (const auto& [alpha, c] : objective.terms())
    cp.objective[static_cast<std::size_t>(y_index.at(alpha))] = c;

  EqualityRow norm;
  norm.coeffs = {{y_index.at(MultiIndex::zero(n)), 1.0}};
  norm.rhs = 1.0;
  norm.note = "y_0 = 1";
  cp.equalities.push_back(std::move(norm));
  if (r >= 1) {
    EqualityRow rnorm;
    const Polynomial<double> premultiplier = pow(squared_norm_poly<double>(n), r);
    for (const auto& [alpha, c] : premultiplier.terms())
      rnorm.coeffs.emplace_back(y_index.at(alpha), c);
    rnorm.rhs = 1.0;
    rnorm.note = "L_y((x_1^2+...+x_n^2)^" + std::to_string(r) + ") = 1";
    cp.equalities.push_back(std::move(rnorm));
  }

  std::vector<SymbolicMatrix> bases;
  bases.push_back(make_moment_block(n, d, y_index));
  for (std::size_t i = 0; i < p.constraints.size(); ++i)
    bases.push_back(make_localizing_block(p.constraints[i], static_cast<int>(i), n,
                                          d - ks[i], y_index));

  // Linear rows are deduplicated across the whole program; structured
  // constraints (a monomial-square g, say) can repeat moment rows verbatim.
  std::set<std::vector<std::pair<int, double>>> seen_rows;
  auto fresh = [&](const std::vector<std::pair<int, double>>& coeffs) {
    auto sorted = coeffs;
    std::sort(sorted.begin(), sorted.end());
    return seen_rows.emplace(std::move(sorted)).second;
  };

  for (const auto& base : bases) {
    switch (kind) {
      case Hierarchy::Lasserre: {
        ConeBlock b;
        b.kind = BlockKind::PSD;
        b.dim = base.dim;
        b.source = base.source;
        b.basis = base.basis;
        for (int i = 0; i < base.dim; ++i)
          for (int j = i; j < base.dim; ++j) append_cell(b.entries, i, j, base.cell(i, j));
        cp.blocks.push_back(std::move(b));
        break;
      }
      case Hierarchy::Sdsos: {
        std::vector<LinRow> diag;
        for (int i = 0; i < base.dim; ++i) {
          LinRow row{merge_cells({{&base.cell(i, i), 1.0}}), diag_note(base, i)};
          if (fresh(row.coeffs)) diag.push_back(std::move(row));
        }
        if (!diag.empty()) cp.blocks.push_back(lin_block(std::move(diag), base.source));
        for (int i = 0; i < base.dim; ++i)
          for (int j = i + 1; j < base.dim; ++j) {
            ConeBlock b;
            b.kind = BlockKind::SOC2x2;
            b.dim = 2;
            b.source = base.source;
            b.basis = {base.basis[static_cast<std::size_t>(i)], base.basis[static_cast<std::size_t>(j)]};
            append_cell(b.entries, 0, 0, base.cell(i, i));
            append_cell(b.entries, 0, 1, base.cell(i, j));
            append_cell(b.entries, 1, 1, base.cell(j, j));
            cp.blocks.push_back(std::move(b));
          }
        break;
      }
      case Hierarchy::Dsos: {
        std::vector<LinRow> rows;
        for (int i = 0; i < base.dim; ++i) {
          LinRow row{merge_cells({{&base.cell(i, i), 1.0}}), diag_note(base, i)};
          if (fresh(row.coeffs)) rows.push_back(std::move(row));
        }
        for (int i = 0; i < base.dim; ++i)
          for (int j = i + 1; j < base.dim; ++j) {
            LinRow plus{merge_cells({{&base.cell(i, i), 1.0}, {&base.cell(i, j), 2.0}, {&base.cell(j, j), 1.0}}),
                        pair_note(base, i, j) + " +"};
            if (fresh(plus.coeffs)) rows.push_back(std::move(plus));
            LinRow minus{merge_cells({{&base.cell(i, i), 1.0}, {&base.cell(i, j), -2.0}, {&base.cell(j, j), 1.0}}),
                         pair_note(base, i, j) + " -"};
            if (fresh(minus.coeffs)) rows.push_back(std::move(minus));
          }
        if (!rows.empty()) cp.blocks.push_back(lin_block(std::move(rows), base.source));
        break;
      }
    }
  }

  cp.validate();
  return cp;
}

ConicProgram build_lasserre(const PolyProblem<double>& p, int d) {
  return build_relaxation(p, d, Hierarchy::Lasserre);
}

ConicProgram build_sdsos(const PolyProblem<double>& p, int d) {
  return build_relaxation(p, d, Hierarchy::Sdsos);
}

ConicProgram build_dsos(const PolyProblem<double>& p, int d) {
  return build_relaxation(p, d, Hierarchy::Dsos);
}

ConicProgram build_r_variant(const PolyProblem<double>& p, int d, int r, Hierarchy kind) {
  if (r < 1) throw Error("r must be >= 1; use the plain builder for r = 0");
  return build_relaxation(p, d, kind, r);
}

std::int64_t count_soc_constraints(int n, int d, const std::vector<int>& constraint_degrees) {
  for (int k : constraint_degrees)
    if (d < k) throw OrderTooSmall("order " + std::to_string(d) + " is below constraint degree bound " + std::to_string(k));
  auto pairs = [](std::int64_t m) { return m * (m - 1) / 2; };
  std::int64_t total = pairs(binomial(n + d, d));
  for (int k : constraint_degrees) total += pairs(binomial(n + d - k, d - k));
  return total;
}

}  // namespace hlab
