#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isoalloc::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kInputError = 2,
  kBoundViolation = 3,
  kInvariantBreach = 4,
};

/// Entry point behind the `isoalloc` binary. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isoalloc::cli
