#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scout {

/// Parses command-line arguments (program name excluded), dispatches the
/// subcommand and writes results to `out` and diagnostics to `err`. Returns
/// the process exit code: 0 on success, nonzero after any diagnostic.
/// Subcommands: export, solve, simulate, bench.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scout
