#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mchr {

/// Runs one CLI command. `args` excludes the program name. Returns the exit
/// code: 0 ok, 2 invalid input, 3 non-convergence, 64 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mchr
