#pragma once

#include <ostream>
#include <span>
#include <string>

namespace ghzmp::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,   // unreadable or invalid scenario, bad argument values
  kExitUsage = 2,        // unknown subcommand or flag
  kExitResourceLimit = 3,
  kExitParadoxMismatch = 4,
  kExitIntegrity = 5,    // internal cross-check failed
};

/// Runs one command line (args excludes the program name). Results go to
/// `out`; diagnostics, one "ghzmp: error[CODE]: ..." line each, go to `err`.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ghzmp::cli
