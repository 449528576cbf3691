#pragma once

#include <string>
#include <vector>

namespace hlab {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // verify residual nonzero / failing report cells
inline constexpr int kExitParseError = 2;
inline constexpr int kExitBadOrder = 3;
inline constexpr int kExitSolverFailure = 4;

/// Full command-line entry point (argv[0] excluded from args).
int run_cli(const std::vector<std::string>& args);

int run_cli(int argc, char** argv);

}  // namespace hlab
