#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace acyclify {

/// Stable exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitParseError = 1,
  kExitNotStratified = 2,
  kExitCapExceeded = 3,
  kExitDisagreement = 4,
};

/// Runs the tool on `args` (without the program name).
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace acyclify
