#pragma once

#include <iosfwd>

namespace kexp {

enum ExitCode : int { kPass = 0, kFail = 1, kConfigError = 2, kNumericalError = 3 };

/// Entry point of kirchhoff_nf. Reports go to `out` (and to --out files),
/// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kexp
