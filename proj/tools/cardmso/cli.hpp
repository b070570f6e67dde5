#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cardmso::cli {

// Exit statuses.
inline constexpr int kHolds = 0;
inline constexpr int kFails = 1;
inline constexpr int kUsage = 2;
inline constexpr int kBudget = 3;
inline constexpr int kInternal = 4;

/// Runs one command line (without the program name). Reports go to `out`, diagnostics
/// to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cardmso::cli
