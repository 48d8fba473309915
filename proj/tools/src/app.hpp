#pragma once

namespace hmfsvm::cli {

// Parses the command line, runs the subcommand and returns the exit code:
// 0 success, 1 input error, 2 config error, 3 internal error.
int run(int argc, char** argv);

}  // namespace hmfsvm::cli
