#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conespec::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kHypothesisError = 2;
inline constexpr int kConvergenceError = 3;

// Runs `conespec <subcommand> [flags]`; args excludes the program name.
// Writes <out>/<subcommand>.{csv,json,gp}; messages go to `out` / `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conespec::cli
