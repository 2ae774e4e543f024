#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hml {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand (mean, deriv, identity, lemma1, rate, suite).  Reports go
/// to --out or to `out`; diagnostics go to `err`.  Returns 0 when everything
/// passed, 1 on a failed or unconverged check, 2 on a usage or config error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hml
