#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace paulikern::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verification or invariant failure
inline constexpr int kExitUsage = 2;    // parse, schema or configuration error

/// Runs the command-line tool. `args` excludes the program name. The report
/// envelope goes to `out` (or --output); diagnostics and the one-line
/// summary go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace paulikern::cli
