#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pptool {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBreach = 1;     // monitored invariant breached, counterexample found
inline constexpr int kExitInvalid = 2;    // input violates an invariant, or bad usage
inline constexpr int kExitIo = 3;
inline constexpr int kExitParse = 4;
inline constexpr int kExitInternal = 5;   // numerical failure inside the library

/// Runs one invocation. `args` excludes the program name. Machine output goes
/// to `out`, human-readable summaries and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pptool
