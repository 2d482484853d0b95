#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace udsim::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // e.g. a failed --check
inline constexpr int kExitInput = 2;    // usage or input errors
inline constexpr int kExitService = 3;  // remote aligner failures

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace udsim::cli
