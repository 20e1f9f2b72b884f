// cli.hpp : command-line entry point (subcommands: encode, extract, cv, compare)
#pragma once

#include <string>
#include <vector>

namespace quest {

/// Run the CLI on arguments given in natural order, program name excluded.
/// Returns the process exit code: 0 success, 2 I/O or undecodable input,
/// 3 image too small, 4 malformed manifest/CSV, 5 configuration error.
int cli_run(std::vector<std::string> args);

}  // namespace quest
