#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kp::cli {

/// Exit codes: 0 every verdict passed, 1 a verdict failed, 2 bad input.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdict = 1;
inline constexpr int kExitInput = 2;

/// Runs one kp-lab invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kp::cli
