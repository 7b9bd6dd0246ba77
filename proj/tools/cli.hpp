#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace esnc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one command line (without the program name). The one-line summary
/// and reports go to out; the effective configuration and diagnostics go
/// to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace esnc::cli
