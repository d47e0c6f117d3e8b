#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace narmax::cli {

/// Exit codes: 0 success, 1 usage, parse or derivation error, 2 non-finite
/// simulation output.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNonFinite = 2;

/// Runs the command line tool on `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace narmax::cli
