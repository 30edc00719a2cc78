#pragma once

#include <ostream>

namespace mvsde {

/// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerdictFail = 2;

/// Entry point of the `mvsde` tool. Messages go to `out` and `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Quick invariant suite: taming dominance and antisymmetry, W2 oracles,
/// refinement coupling, interaction modes. Prints one line per check.
bool run_selftest(std::ostream& out);

}  // namespace mvsde
