// Command-line front end. Exposed as a library function so tests can drive
// subcommands in-process; the mgsag binary is a thin wrapper.

#pragma once

#include <string>
#include <vector>

namespace mgsag::cli {

/// Runs one invocation, e.g. {"synth", "--out", "run", "--docs", "20"}.
/// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
int run(const std::vector<std::string>& args);

}  // namespace mgsag::cli
