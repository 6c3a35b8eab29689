#pragma once

#include <iosfwd>

namespace coopsafe {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUnfulfilled = 1,
  kExitConflicts = 2,
  kExitInputError = 3,
  kExitUsageError = 4,
};

/// Entry point of the `coopsafe` command. Reports go to `out`, diagnostics
/// to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coopsafe
