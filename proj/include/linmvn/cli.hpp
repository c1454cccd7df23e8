#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace linmvn {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitMalformedInput = 1,
  kExitInfeasible = 2,
  kExitNumericalFailure = 3,
  kExitComparisonFailed = 4,
};

/// Runs the `linmvn` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linmvn
