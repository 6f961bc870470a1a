#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qdc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;

// Runs `qdc` with argv-style arguments (args[0] is the program name).
// Output goes to --out when given, otherwise to `out`; diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdc::cli
