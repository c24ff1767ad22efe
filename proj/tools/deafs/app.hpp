#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deafs::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kDataError = 2,
  kSolverError = 3,
  kInfeasible = 4,
};

/// Runs the command line `args` (args[0] is the program name). The JSON
/// report goes to `out` unless --out names a directory; diagnostics go to
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deafs::cli
