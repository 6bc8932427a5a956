#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sievelab/config.hpp"
#include "sievelab/report.hpp"

namespace sievelab {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitBudgetFlagged = 2,
  kExitResource = 3,
};

struct CommandOutcome {
  Report report;
  int exit_code = kExitOk;
};

// Runs one resolved configuration.
CommandOutcome run_command(const RunConfig& config);

// Full command line minus argv[0]. "--config path" loads a key=value file
// before the remaining flags are applied. Diagnostics go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sievelab
