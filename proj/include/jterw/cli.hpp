#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jterw {

/// Exit statuses of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `jterw` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jterw
