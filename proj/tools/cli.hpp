#pragma once

#include <iosfwd>

namespace samossa::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kAcceptance = 3 };

/// Runs the command line. Normal output goes to `out`; help text is written
/// to `out` as well, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace samossa::cli
