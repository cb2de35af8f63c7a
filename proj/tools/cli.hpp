#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fogndt::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,  // certificate violation or I/O error
  kUsage = 2,    // bad flags or an invalid configuration
};

/// Runs one command line (without the program name) and returns the exit
/// status. All output goes to `out` and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fogndt::cli
