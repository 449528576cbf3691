#include "hlab/cli.hpp"

#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "hlab/problem_io.hpp"

namespace hlab {

using nlohmann::json;

namespace {

const std::map<std::string, Hierarchy> kKinds = {
    {"lasserre", Hierarchy::Lasserre},
    {"sdsos", Hierarchy::Sdsos},
    {"dsos", Hierarchy::Dsos},
};

void emit(const std::string& path, const std::string& content) {
  if (path == "-")
    std::cout << content;
  else
    write_file(path, content);
}

int cmd_relax(const std::string& input, Hierarchy kind, int order, int r,
              const std::string& format, const std::string& output) {
  const PolyProblem<QSqrt2> exact = load_problem(input);
  const ConicProgram cp = build_relaxation(to_double(exact), order, kind, r);
  emit(output, format == "native" ? render_native(cp) : render_sdpa(cp));
  return kExitOk;
}

int cmd_solve(const std::string& input, Hierarchy kind, int order, int r, double tol,
              int max_iters, bool as_json) {
  const PolyProblem<QSqrt2> exact = load_problem(input);
  const ConicProgram cp = build_relaxation(to_double(exact), order, kind, r);
  SolveOptions opts;
  opts.tolerance = tol;
  opts.max_iters = max_iters;
  const SolveResult res = solve(cp, opts);

  std::optional<Eigen::VectorXd> minimizer;
  std::optional<double> multiplier;
  if (res.status == SolveStatus::Optimal) {
    const auto mm = moment_matrix(solution_moments(cp, res), order);
    minimizer = extract_minimizer(mm);
    if (minimizer && kind == Hierarchy::Lasserre && !exact.constraints.empty())
      multiplier = kkt_multiplier_from_dual(cp, res, *minimizer);
  }

  if (as_json) {
    std::cout << solve_report_json(cp, res, kind, order, r, minimizer, multiplier).dump(2) << "\n";
  } else {
    std::printf("status: %s\n", to_string(res.status));
    std::printf("iterations: %d\n", res.iterations);
    std::printf("bound (dual value): %.9f\n", res.dual_value);
    std::printf("primal value: %.9f\n", res.primal_value);
    std::printf("residuals: primal %.3e, dual %.3e, gap %.3e\n", res.residuals.primal,
                res.residuals.dual, res.residuals.gap);
    if (minimizer) {
      std::printf("minimizer:");
      for (Eigen::Index i = 0; i < minimizer->size(); ++i) std::printf(" %.9f", (*minimizer)[i]);
      std::printf("\n");
    } else {
      std::printf("minimizer: none (moment matrix is not numerically rank-1)\n");
    }
    if (multiplier) std::printf("kkt multiplier: %.9f\n", *multiplier);
  }
  return res.status == SolveStatus::Optimal ? kExitOk : kExitSolverFailure;
}

int cmd_verify(const std::string& certificate_path, const std::string& problem_path) {
  const PolyProblem<QSqrt2> problem = load_problem(problem_path);
  const Certificate cert = load_certificate(certificate_path, problem.num_vars);
  if (cert.sigmas.size() != problem.constraints.size() + 1)
    throw ParseError("certificate provides " + std::to_string(cert.sigmas.size()) +
                     " multipliers but the problem needs " +
                     std::to_string(problem.constraints.size() + 1));
  const Polynomial<QSqrt2> residual = verify_identity(problem, cert);

  for (std::size_t i = 0; i < cert.sigmas.size(); ++i) {
    const MultiplierClass cls = classify_multiplier(cert.sigmas[i]);
    std::printf("sigma_%zu: %s\n", i, to_string(cls).c_str());
  }
  if (residual.is_zero()) {
    std::printf("EXACT\n");
    return kExitOk;
  }
  std::printf("residual: %s\n", to_text(residual).c_str());
  return kExitCheckFailed;
}

int cmd_reproduce(const std::vector<int>& orders, double tol, bool as_json) {
  const ReproduceReport report = reproduce(orders, tol);
  if (as_json) {
    std::cout << reproduce_report_json(report).dump(2) << "\n";
  } else {
    std::printf("tolerance: %g\n", report.tolerance);
    for (const auto& c : report.cells) {
      if (c.reference)
        std::printf("%-26s %12.7f  vs %12.7f (%s, tol %g, %s)  [%s]\n", c.name.c_str(), c.value,
                    *c.reference, c.reference_exact.c_str(), c.tolerance,
                    c.comparison == "abs" ? "two-sided" : "upper bound", c.pass ? "pass" : "FAIL");
      else
        std::printf("%-26s %12.7f  (%s)  [%s]\n", c.name.c_str(), c.value,
                    c.reference_exact.c_str(), c.pass ? "pass" : "FAIL");
    }
    for (const auto& c : report.exact_checks)
      std::printf("exact: %-48s [%s]%s%s\n", c.name.c_str(), c.pass ? "pass" : "FAIL",
                  c.note.empty() ? "" : " ", c.note.c_str());
    std::printf("overall: %s\n", report.all_pass() ? "pass" : "FAIL");
  }
  return report.all_pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"hierarchy-lab: moment/sum-of-squares relaxation toolkit"};
  app.require_subcommand(1);

  std::string input, output = "-", format = "sdpa", certificate_path, problem_path;
  std::string kind_name = "lasserre";
  int order = 1, r = 0, max_iters = 200;
  double tol = 1e-8;
  bool as_json = false;
  std::vector<int> orders = {1, 2, 3};

  auto add_kind = [&](CLI::App* cmd) {
    cmd->add_option("--kind", kind_name, "relaxation kind")
        ->check(CLI::IsMember({"lasserre", "sdsos", "dsos"}));
    cmd->add_option("--order", order, "relaxation order d")->required();
    cmd->add_option("--r", r, "premultiplication power (0 = plain hierarchy)");
  };

  CLI::App* relax = app.add_subcommand("relax", "build a relaxation and export it");
  relax->add_option("input", input, "problem file (JSON)")->required();
  add_kind(relax);
  relax->add_option("--export", format, "export format")->check(CLI::IsMember({"sdpa", "native"}));
  relax->add_option("-o,--output", output, "output path ('-' = stdout)");

  CLI::App* solve_cmd = app.add_subcommand("solve", "build and solve a relaxation");
  solve_cmd->add_option("input", input, "problem file (JSON)")->required();
  add_kind(solve_cmd);
  solve_cmd->add_option("--tol", tol, "solver tolerance")->envname("HIERARCHY_LAB_TOL");
  solve_cmd->add_option("--max-iters", max_iters, "iteration cap");
  solve_cmd->add_flag("--json", as_json, "machine-readable output");

  CLI::App* verify = app.add_subcommand("verify", "exactly verify a certificate");
  verify->add_option("certificate", certificate_path, "certificate file (JSON)")->required();
  verify->add_option("problem", problem_path, "problem file (JSON)")->required();

  double rep_tol = 1e-6;
  CLI::App* rep = app.add_subcommand("reproduce", "run the bundled counterexample scenario");
  rep->add_option("--orders", orders, "relaxation orders (subset of 1..5)");
  rep->add_option("--tol", rep_tol, "comparison tolerance")->envname("HIERARCHY_LAB_TOL");
  rep->add_flag("--json", as_json, "machine-readable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (relax->parsed()) return cmd_relax(input, kKinds.at(kind_name), order, r, format, output);
    if (solve_cmd->parsed())
      return cmd_solve(input, kKinds.at(kind_name), order, r, tol, max_iters, as_json);
    if (verify->parsed()) return cmd_verify(certificate_path, problem_path);
    if (rep->parsed()) return cmd_reproduce(orders, rep_tol, as_json);
  } catch (const OrderTooSmall& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadOrder;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParseError;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolverFailure;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckFailed;
  }
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace hlab
