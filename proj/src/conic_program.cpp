#include "hlab/conic_program.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hlab/errors.hpp"

namespace hlab {

const char* to_string(BlockKind k) {
  switch (k) {
    case BlockKind::PSD: return "PSD";
    case BlockKind::SOC2x2: return "SOC2x2";
    case BlockKind::LIN: return "LIN";
  }
  return "?";
}

void ConicProgram::validate() const {
  if (num_y < 0 || static_cast<int>(objective.size()) != num_y)
    throw Error("objective size does not match num_y");
  if (!y_labels.empty() && static_cast<int>(y_labels.size()) != num_y)
    throw Error("y_labels size does not match num_y");

  auto check_index = [&](int y) {
    if (y != kConstTerm && (y < 0 || y >= num_y)) throw Error("affine map references an undeclared y entry");
  };

  // (row, coeffs, const) signature per linear inequality, program-wide.
  std::set<std::pair<std::vector<std::pair<int, double>>, double>> lin_rows;

  for (const auto& b : blocks) {
    if (b.dim < 1) throw Error("block dimension must be positive");
    if (b.kind == BlockKind::SOC2x2 && b.dim != 2) throw Error("SOC2x2 block must have dimension 2");
    if (!b.basis.empty() && static_cast<int>(b.basis.size()) != b.dim)
      throw Error("block basis size does not match dimension");
    if (b.kind == BlockKind::LIN && !b.row_notes.empty() &&
        static_cast<int>(b.row_notes.size()) != b.dim)
      throw Error("LIN row notes size does not match dimension");
    for (const auto& e : b.entries) {
      check_index(e.y_index);
      if (!std::isfinite(e.coeff)) throw Error("non-finite block coefficient");
      if (e.row < 0 || e.col < 0 || e.row >= b.dim || e.col >= b.dim || e.row > e.col)
        throw Error("block entry outside the upper triangle");
      if (b.kind == BlockKind::LIN && e.row != e.col)
        throw Error("LIN block entries must sit on the diagonal");
    }
    if (b.kind == BlockKind::LIN) {
      for (int r = 0; r < b.dim; ++r) {
        std::vector<std::pair<int, double>> coeffs;
        double cst = 0.0;
        for (const auto& e : b.entries) {
          if (e.row != r) continue;
          if (e.y_index == kConstTerm)
            cst += e.coeff;
          else
            coeffs.emplace_back(e.y_index, e.coeff);
        }
        std::sort(coeffs.begin(), coeffs.end());
        if (!lin_rows.emplace(std::move(coeffs), cst).second)
          throw Error("duplicate linear inequality row");
      }
    }
  }

  for (const auto& eq : equalities) {
    if (eq.coeffs.empty()) throw Error("empty equality row");
    for (const auto& [y, c] : eq.coeffs) {
      if (y == kConstTerm || y < 0 || y >= num_y) throw Error("equality references an undeclared y entry");
      if (!std::isfinite(c)) throw Error("non-finite equality coefficient");
    }
  }
}

}  // namespace hlab
