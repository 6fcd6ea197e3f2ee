#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scorecard {

/// Subcommands: synth, check, solve, kkt. Returns 0 on success, 1 on a
/// runtime failure and 2 on a usage error.
int run_cli(int argc, char** argv);

/// Same, with explicit arguments (excluding the program name) and streams.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scorecard
