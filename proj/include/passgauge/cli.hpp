#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace passgauge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Subcommands: train, evaluate, score, rank-features, serve. args excludes
// the program name.
int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace passgauge::cli
