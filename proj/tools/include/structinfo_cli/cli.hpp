#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace structinfo::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 1,
  kInvariantViolation = 2,
  kSizeGuard = 3,
};

/// Runs one command line (without the program name). All output goes to
/// `out`/`err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace structinfo::cli
