#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nnapprox {

/// Exit codes of the command-line interface.
enum ExitCode : int { kExitOk = 0, kExitViolated = 1, kExitInvalid = 2, kExitBudget = 3 };

/// Runs `nnapprox <subcommand> ...`; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nnapprox
