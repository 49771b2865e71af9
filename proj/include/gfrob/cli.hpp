#pragma once

#include <iosfwd>

namespace gfrob::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `gfrob` tool: verify | estimate | train | report.
/// Machine-readable output goes to `out`, diagnostics and tables to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gfrob::cli
