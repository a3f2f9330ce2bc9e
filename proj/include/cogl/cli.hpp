#pragma once

#include <ostream>

namespace cogl {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,    ///< bad flags, config file, or dataset
    kExitNumerical = 2, ///< non-finite loss or failed gradient check
};

/// Entry point of the `cogl` tool. Subcommands: train, eval, gradcheck, sweep,
/// export-embeddings. Output goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cogl
