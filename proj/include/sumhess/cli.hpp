#pragma once

// Command-line front end: verify, sample, solve, estimate, report.
// Exit 0 on success, 1 on a failed check or a solver failure, 2 on usage or
// config errors. Diagnostics go to err; CSV goes to files or to out.

#include <iosfwd>
#include <string>
#include <vector>

namespace sumhess {

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sumhess
