#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cellsheaf::cli {

enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitUsage = 2 };

/// Environment variable holding the default tolerance; --tol overrides it.
inline constexpr const char* kToleranceVariable = "CELLSHEAF_TOL";

/// Runs one sheafctl command (arguments without the program name). The
/// report goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cellsheaf::cli
