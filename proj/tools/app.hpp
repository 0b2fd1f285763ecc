#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlfv::cli {

enum ExitCode : int {
  kSuccess = 0,
  kDiagnosticFailure = 1,
  kConfigError = 2,
};

/// Runs the command line `args` (program name excluded). Progress and warnings go to `err`,
/// summaries to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlfv::cli
