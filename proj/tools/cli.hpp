#ifndef POOLEST_TOOLS_CLI_HPP
#define POOLEST_TOOLS_CLI_HPP

#include <iosfwd>

#include "poolest/error.hpp"

namespace poolest::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitDegenerateEstimator = 4;
inline constexpr int kExitIo = 5;

int exit_code_for(ErrorCode code) noexcept;

/// Runs one invocation of the workbench. Records go to `out`; failures are
/// reported on `err` as a single JSON object {"error": CODE, "message": ...}.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace poolest::cli

#endif  // POOLEST_TOOLS_CLI_HPP
