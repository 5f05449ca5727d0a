#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vine::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvalidInput = 2,
  kCrossCheckFailed = 3,
};

/// Runs the `vinectl` command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vine::cli
