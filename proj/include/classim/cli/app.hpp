#pragma once

#include <ostream>

namespace classim::cli {

/// Exit codes of the classim tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

/// Parses `argv` and runs one subcommand. Reports go to `out`; a failure
/// prints a single "error: <kind>: <reason>" line to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace classim::cli
