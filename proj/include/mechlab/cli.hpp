#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mechlab {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitInput = 2, kExitResource = 3 };

// Runs one command; args exclude the program name. The report goes to out,
// usage errors to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CliOutcome {
  int exit_code = 0;
  std::string report;
  std::string errors;
};

CliOutcome run_captured(const std::vector<std::string>& args);

}  // namespace mechlab
