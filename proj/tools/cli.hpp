#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace splitconv::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kNotSplitRegime = 2,
  kNoSavingsRegion = 3,
  kInputError = 4,
};

/// Runs one invocation. args excludes the program name. Errors are reported on
/// err as a single JSON line carrying a reason code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace splitconv::cli
