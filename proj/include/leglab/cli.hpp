#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace leglab {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitCounterexamples = 1,
  kExitUsage = 2,
  kExitBudget = 3,
};

/// Runs one command. `args` excludes the program name; `in` feeds `eval`
/// when no argument is given.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr,
            std::istream& in = std::cin);

}  // namespace leglab
