#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hlab/moments.hpp"
#include "hlab/polynomial.hpp"
#include "hlab/relaxations.hpp"
#include "hlab/solver.hpp"

namespace hlab {

/// sigma = sum_k weight_k * (poly_k)^2 with nonnegative weights.
struct SquareDecomposition {
  std::vector<std::pair<QSqrt2, Polynomial<QSqrt2>>> squares;

  Polynomial<QSqrt2> expand(int num_vars) const;
};

/// Data of a claimed identity (x_1^2+...+x_n^2)^r (f - lambda) = sigma_0 + sum_i sigma_i g_i.
struct Certificate {
  QSqrt2 lambda;
  int r = 0;
  std::vector<SquareDecomposition> sigmas;  // sigma_0 .. sigma_m
};

/// Cone membership of a decomposition. A valid weighted-square decomposition
/// is always SOS; the flags record the two restricted cones.
struct MultiplierClass {
  bool sdsos = false;  // every square involves at most two monomials
  bool dsos = false;   // assembled Gram matrix diagonally dominant, diagonal >= 0
};

std::string to_string(const MultiplierClass& c);

/// Throws InvalidDecomposition on a negative weight.
MultiplierClass classify_multiplier(const SquareDecomposition& sigma);

/// Expands (x_1^2+...+x_n^2)^r (f - lambda) - sigma_0 - sum_i sigma_i g_i
/// exactly; the zero polynomial certifies the identity.
Polynomial<QSqrt2> verify_identity(const PolyProblem<QSqrt2>& p, const Certificate& cert);

/// Exact 2x2 positive-semidefiniteness: a >= 0, c >= 0 and ac - b^2 >= 0.
bool psd_2x2(const QSqrt2& a, const QSqrt2& b, const QSqrt2& c);

/// Exact symmetric PSD test by fraction-free symmetric elimination: a zero
/// pivot forces its whole row to vanish, a negative pivot refutes.
bool psd_exact(const QMatrix& a);

/// Feasibility of y for the order-d relaxed cones: y_0 = 1, every 2x2 moment
/// minor PSD over |alpha|,|beta| <= d, and the localizing 2x2 analogues for g
/// over the same basis. All tests are exact.
bool check_moment_feasibility(const MomentSequence<QSqrt2>& y, int d, const Polynomial<QSqrt2>& g);

/// Stationarity, sign, primal feasibility and complementarity residuals of a
/// single-constraint program at (x, lam): returns the n stationarity
/// components of grad f - lam * grad g, then min(lam,0), min(g(x),0), lam*g(x).
std::vector<QSqrt2> kkt_residual(const std::vector<QSqrt2>& x, const QSqrt2& lam,
                                 const PolyProblem<QSqrt2>& p);

/// True iff p has a constant Hessian and that Hessian is PSD, both exact.
/// Throws UnsupportedDegree when the Hessian is not constant.
bool check_hessian_psd_constant(const Polynomial<QSqrt2>& p);

struct NonexistenceRow {
  int order = 0;
  double bound = 0.0;        // dual value of the solved relaxation
  double primal = 0.0;
  SolveStatus status = SolveStatus::NumericalFailure;
  std::optional<double> gap_to_reference;
  bool sequence_feasible = false;  // exact feasibility verified at this order
};

struct NonexistenceReport {
  Hierarchy kind = Hierarchy::Sdsos;
  int r = 0;
  std::vector<NonexistenceRow> rows;
  /// Exact upper bound on every dual value, implied by a registered feasible
  /// moment sequence (weak duality); absent when no sequence applies.
  std::optional<QSqrt2> exact_cap;
  std::string note;
};

struct NonexistenceOptions {
  int r = 0;
  std::optional<QSqrt2> reference_value;
  /// Exactly feasible moment generator registered for the problem, if any.
  std::function<QSqrt2(const MultiIndex&)> exact_sequence;
  SolveOptions solve;
};

/// Solves the requested hierarchy at each order, reports bound and gap, and
/// derives the exact cap on all dual values whenever the registered sequence
/// is verified feasible. Solver failures are annotated with their order.
NonexistenceReport certify_nonexistence_report(const PolyProblem<QSqrt2>& p, Hierarchy kind,
                                               const std::vector<int>& orders,
                                               const NonexistenceOptions& opts = {});

}  // namespace hlab
