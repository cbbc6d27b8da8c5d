#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace magnonlink {

/// Exit statuses of the command-line tool.
enum ExitStatus : int { kExitOk = 0, kExitUsage = 1, kExitInput = 2, kExitNumerical = 3 };

/// Runs one command line (without the program name). Human-readable
/// summaries go to `out`; errors go to `err` as single `code: message` lines.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_dispatch(int argc, char** argv);

}  // namespace magnonlink
