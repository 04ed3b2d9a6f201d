#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tcamsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitBenchFailure = 1;
inline constexpr int kExitInputError = 2;

/// Runs the command line `args` (without the program name). Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tcamsim::cli
