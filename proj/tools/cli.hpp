#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ufp {

/// Runs the workbench on `args` (without the program name).
/// Exit codes: 0 ok, 1 negative verdict or unsat, 2 input error, 3 capacity
/// exceeded, 4 internal error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ufp
