#pragma once

#include <ostream>

namespace addm {

/// Exit codes: 0 verified or completed, 1 input error, 2 counterexample found.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitCounterexample = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace addm
