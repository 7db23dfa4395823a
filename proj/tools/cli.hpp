#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tumorage::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kDomain = 3,
  kIngestion = 4,
};

// Runs the command line `args` (without the program name). Normal output goes to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tumorage::cli
