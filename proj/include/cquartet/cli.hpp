#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cquartet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one command. args excludes the program name. Results and help go to
// out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cquartet::cli
