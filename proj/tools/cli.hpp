#pragma once

#include <ostream>

namespace finsler::cli {

/// Exit codes: 0 all verdicts pass, 2 a verdict failed, 1 execution or usage error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerdictFailure = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace finsler::cli
