#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hlab/multi_index.hpp"

namespace hlab {

enum class BlockKind { PSD, SOC2x2, LIN };

const char* to_string(BlockKind k);

/// Constant pseudo-index for affine terms that do not reference y.
inline constexpr int kConstTerm = -1;

/// Block provenance markers; nonnegative values are constraint indices.
inline constexpr int kSourceMoment = -1;
inline constexpr int kSourceCustom = -2;

/// One coefficient of a block's affine map: entry (row, col) of the block
/// matrix accumulates coeff * y[y_index] (coeff itself when y_index is
/// kConstTerm). Only the upper triangle row <= col is stored; LIN blocks use
/// row == col as the inequality-row id.
struct BlockEntry {
  int row = 0;
  int col = 0;
  int y_index = kConstTerm;
  double coeff = 0.0;
  bool operator==(const BlockEntry&) const = default;
};

struct ConeBlock {
  BlockKind kind = BlockKind::PSD;
  int dim = 0;
  std::vector<BlockEntry> entries;
  int source = kSourceCustom;
  std::vector<MultiIndex> basis;       // row labels for PSD, the pair for SOC2x2
  std::vector<std::string> row_notes;  // per-row provenance for LIN blocks
  bool operator==(const ConeBlock&) const = default;
};

struct EqualityRow {
  std::vector<std::pair<int, double>> coeffs;  // (y_index, coeff)
  double rhs = 0.0;
  std::string note;
  bool operator==(const EqualityRow&) const = default;
};

/// Block-structured conic program over the moment vector y:
///   minimize objective . y   s.t.   equalities hold, every block is in its cone.
/// PSD and SOC2x2 blocks are symmetric-matrix cones; LIN rows are >= 0.
struct ConicProgram {
  int num_vars = 0;  // polynomial variables n; 0 for hand-built programs
  int num_y = 0;
  std::vector<MultiIndex> y_labels;  // empty for hand-built programs
  std::vector<double> objective;     // size num_y
  std::vector<EqualityRow> equalities;
  std::vector<ConeBlock> blocks;

  /// Structural checks: every affine map references declared y entries, block
  /// shapes match their kind, and no linear row repeats. Throws Error.
  void validate() const;

  bool operator==(const ConicProgram&) const = default;
};

}  // namespace hlab
