#pragma once

#include <string>

#include <json.hpp>

#include "hlab/certificates.hpp"
#include "hlab/conic_program.hpp"
#include "hlab/counterexample.hpp"
#include "hlab/relaxations.hpp"
#include "hlab/solver.hpp"

namespace hlab {

/// Problem documents carry exact coefficients (rational plus optional sqrt2
/// part) as strings; numeric JSON coefficients are rejected so the same file
/// feeds both the float solver and the exact verifier.
PolyProblem<QSqrt2> parse_problem_json(const nlohmann::json& j);
PolyProblem<QSqrt2> load_problem(const std::string& path);

Certificate parse_certificate_json(const nlohmann::json& j, int num_vars);
Certificate load_certificate(const std::string& path, int num_vars);

/// SDPA sparse (*.dat-s): one SDPA block per PSD/SOC2x2 block, all linear
/// inequalities merged into one diagonal block, block provenance in header
/// comments. The y_0 = 1 normalization is eliminated by substitution; any
/// remaining equality row is exported as a pair of opposing inequalities.
std::string render_sdpa(const ConicProgram& cp);

/// Loss-free JSON serialization of a ConicProgram; parse_native inverts it
/// bit-exactly (block order and float values included).
std::string render_native(const ConicProgram& cp);
ConicProgram parse_native(const std::string& text);

nlohmann::json reproduce_report_json(const ReproduceReport& report);

nlohmann::json solve_report_json(const ConicProgram& cp, const SolveResult& res, Hierarchy kind,
                                 int order, int r,
                                 const std::optional<Eigen::VectorXd>& minimizer,
                                 std::optional<double> multiplier);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hlab
