#pragma once

#include <iosfwd>

namespace pathlim {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitInput = 2,
  kExitDegenerate = 3,
  kExitPrecondition = 4,
  kExitNumeric = 5,
};

/// Entry point of the `pathlim` executable, callable in-process.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pathlim
