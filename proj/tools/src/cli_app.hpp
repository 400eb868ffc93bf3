#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qagarch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitCheckFailed = 3;

/// Runs the `qagarch` command line. `args` excludes the program name.
/// CSV goes to files or to `out` (with --csv); messages go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qagarch::cli
