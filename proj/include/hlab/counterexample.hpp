#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hlab/certificates.hpp"
#include "hlab/relaxations.hpp"

namespace hlab {

/// The bundled convex quadratic program over the unit disk,
///   minimize (-2 + x1 + x2)^2   s.t.   1 - x1^2 - x2^2 >= 0,
/// together with its exact solution data: the full-hierarchy (Lasserre) value
/// is reached at order 1 while the SDSOS/DSOS bounds stay exactly 2 below it
/// at every order.
struct ReferenceData {
  PolyProblem<QSqrt2> problem;
  std::vector<QSqrt2> minimizer;  // (1/sqrt2, 1/sqrt2)
  QSqrt2 multiplier;              // 2(sqrt2 - 1)
  QSqrt2 global_value;            // 2(3 - 2 sqrt2)
  QSqrt2 sdsos_value;             // 4(1 - sqrt2)
  QSqrt2 gap;                     // 2
  Certificate lasserre_certificate;
  Certificate sdsos_certificate;

  /// Exact self-consistency: zero KKT residual at (minimizer, multiplier),
  /// f(minimizer) = global_value, g(minimizer) = 0, global - sdsos = gap, and
  /// both certificates verify with zero residual. Throws Error on failure.
  void self_check() const;

  /// Shared validated instance; self_check runs once on first use.
  static const ReferenceData& instance();
};

struct ReportCell {
  std::string name;
  double value = 0.0;
  std::optional<double> reference;  // float reference when two-sided
  std::string reference_exact;      // exact rendering of the reference
  std::string comparison;           // "abs" or "le"
  double tolerance = 0.0;
  bool pass = false;
  std::string status;  // solver status or "exact"
  std::string note;
};

struct ExactCheck {
  std::string name;
  bool pass = false;
  std::string note;
};

struct ReproduceReport {
  std::vector<int> orders;
  double tolerance = 0.0;
  std::vector<ReportCell> cells;
  std::vector<ExactCheck> exact_checks;

  bool all_pass() const;
};

/// Runs the Lasserre/SDSOS/DSOS relaxations (and their r = 1 variants where
/// the order admits them) across the given orders, the exact certificate and
/// moment checks, minimizer extraction and the KKT multiplier, comparing every
/// number against ReferenceData. Solver failures are annotated per cell and
/// the report is still produced. Orders must lie in 1..5.
ReproduceReport reproduce(const std::vector<int>& orders, double tolerance);

}  // namespace hlab
