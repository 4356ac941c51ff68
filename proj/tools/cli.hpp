#pragma once

#include <iosfwd>

namespace compass::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInfeasible = 3;

/// Runs one CLI invocation. All output goes to the given streams so tests
/// can capture it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace compass::cli
