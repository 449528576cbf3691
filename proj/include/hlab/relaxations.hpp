#pragma once

#include <cstdint>
#include <vector>

#include "hlab/conic_program.hpp"
#include "hlab/polynomial.hpp"

namespace hlab {

enum class Hierarchy { Lasserre, Sdsos, Dsos };

const char* to_string(Hierarchy h);

/// Polynomial program: minimize objective subject to constraints[i](x) >= 0.
template <typename T>
struct PolyProblem {
  Polynomial<T> objective;
  std::vector<Polynomial<T>> constraints;
  int num_vars = 0;
};

PolyProblem<double> to_double(const PolyProblem<QSqrt2>& p);

/// Smallest admissible relaxation order: max(ceil((deg f + 2r)/2), max_i k_i).
int min_order(const PolyProblem<double>& p, int r = 0);

/// Shared builder behind the three hierarchies. r >= 1 premultiplies the
/// objective by (x_1^2+...+x_n^2)^r and adds its Riesz normalization next to
/// y_0 = 1; the cone blocks are those of the plain order-d relaxation.
ConicProgram build_relaxation(const PolyProblem<double>& p, int d, Hierarchy kind, int r = 0);

/// Order-d moment relaxation with full PSD moment and localizing blocks.
ConicProgram build_lasserre(const PolyProblem<double>& p, int d);

/// Every PSD block relaxed to its 2x2 principal submatrices (one SOC2x2 block
/// per unordered row pair) plus explicit diagonal nonnegativity.
ConicProgram build_sdsos(const PolyProblem<double>& p, int d);

/// Every PSD block relaxed to the four linear inequalities per row pair, with
/// diagonal rows deduplicated.
ConicProgram build_dsos(const PolyProblem<double>& p, int d);

/// The r >= 1 premultiplied variant of the requested hierarchy.
ConicProgram build_r_variant(const PolyProblem<double>& p, int d, int r, Hierarchy kind);

/// Number of 2x2 principal-submatrix constraints the SDSOS relaxation emits:
/// C(C(n+d,d),2) + sum_i C(C(n+d-k_i,d-k_i),2).
std::int64_t count_soc_constraints(int n, int d, const std::vector<int>& constraint_degrees);

}  // namespace hlab
