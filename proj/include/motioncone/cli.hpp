#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace motioncone {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitInvalidInput = 3;

/// Runs the motioncone command line. `args` excludes the program name.
/// Results marked `--out -` go to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Applies MOTIONCONE_LOG (error, info, debug) to a stderr logger.
void configure_logging();

}  // namespace motioncone
