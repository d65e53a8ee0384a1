#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace camid::cli {

/// Process exit statuses.
enum ExitCode : int {
  kOk = 0,
  kUsageError = 2,
  kDataError = 3,
  kNumericFailure = 4,
};

/// Runs the `camid` command line; `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace camid::cli
