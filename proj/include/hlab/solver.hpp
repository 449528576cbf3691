#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "hlab/conic_program.hpp"
#include "hlab/moments.hpp"

namespace hlab {

enum class SolveStatus { Optimal, MaxIterations, NumericalFailure, InfeasibleDetected };

const char* to_string(SolveStatus s);

struct SolveOptions {
  double tolerance = 1e-8;
  int max_iters = 200;
};

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double max() const { return std::max(primal, std::max(dual, gap)); }
};

/// Objective values and infeasibility terms of one iterate, kept so weak
/// duality can be checked along the whole path.
struct IterateRecord {
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
  double infeasibility = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  double primal_value = 0.0;
  double dual_value = 0.0;
  Eigen::VectorXd y;
  /// Dual matrix per cone block, aligned with ConicProgram::blocks. These are
  /// the Gram matrices of the multiplier polynomials; LIN blocks store their
  /// dual row vector as a dim x 1 column.
  std::vector<Eigen::MatrixXd> dual_blocks;
  int iterations = 0;
  Residuals residuals;
  std::vector<IterateRecord> trace;
};

/// Primal-dual path-following solve with a Mehrotra predictor-corrector step.
/// Every block is scaled as a dense PSD cone (LIN rows as a product of 1x1
/// cones), so one code path covers SDP, SOCP-style 2x2 and LP blocks.
SolveResult solve(const ConicProgram& cp, const SolveOptions& opts = {});

/// View of the solved moment vector as a float moment sequence.
MomentSequence<double> solution_moments(const ConicProgram& cp, const SolveResult& res);

/// Reads the minimizer off a numerically rank-1 moment matrix: when the ratio
/// of the second-largest to the largest eigenvalue is below tol, returns the
/// point from the degree-1 rows of the normalized rank-1 factor.
std::optional<Eigen::VectorXd> extract_minimizer(const SymMatrix<double>& m, double tol = 1e-5);

/// Evaluates the constraint's multiplier polynomial, reconstructed from the
/// PSD dual block, at the point x.
double kkt_multiplier_from_dual(const ConicProgram& cp, const SolveResult& res,
                                const Eigen::VectorXd& x, int constraint = 0);

}  // namespace hlab
