#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcmdo {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitInput = 2,
    kExitUnbounded = 3,
    kExitCap = 4,
};

/// Runs the tool with `args` excluding the program name.  Summaries go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcmdo
