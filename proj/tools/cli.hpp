#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace subdep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitTruncation = 3;
inline constexpr int kExitNumerics = 4;

/// Runs one command line (without the program name). CSV results go to
/// `out` unless a subcommand writes files; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace subdep::cli
