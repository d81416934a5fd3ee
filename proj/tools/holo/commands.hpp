#pragma once

#include <iosfwd>

namespace holo::cli {

inline constexpr const char* kVersion = "holo 0.1.0";

/// Exit statuses shared by every subcommand.
enum ExitStatus : int {
  kOk = 0,
  kFailure = 1,    // invalid input data, configuration or runtime failure
  kUsage = 2,      // bad arguments or unreadable input file
  kSkipped = 77,
};

/// Parses `argv` and runs the selected subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace holo::cli
