#pragma once

#include <iosfwd>

namespace brw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidArguments = 2;
inline constexpr int kExitNumericalFailure = 3;

/// Parses argv, runs one subcommand and writes its payload to `out` (or the
/// --out file). Diagnostics go to `err`. Returns the process exit status.
/// The worker count can be overridden through the BRW_THREADS variable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace brw::cli
