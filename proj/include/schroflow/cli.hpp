#pragma once

#include <iosfwd>

namespace schroflow::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kHardyInvalid = 3,
  kExpectationMiss = 4,
  kNumericFailure = 5,
};

/// Parses `schroflow <command> --config <path> [--out <dir>] [--expect <json>] [--threads <n>]`,
/// runs the command and returns the exit code. Diagnostics go to `err`, the one-line summary to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace schroflow::cli
