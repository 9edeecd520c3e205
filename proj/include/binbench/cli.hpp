#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace binbench::cli {

/// Stable process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDecode = 2,
    kParams = 3,
    kDimension = 4,
    kInsufficientMethods = 5,
    kIo = 6,
};

/// Runs the command line `args` (args[0] is the program name) and returns the
/// exit code. Subcommands: binarize, evaluate, rank, gen.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace binbench::cli
