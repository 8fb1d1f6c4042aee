#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dlr::cli {

/// Runs one subcommand. `args` excludes the program name.
/// Exit codes: 0 ok, 1 usage error, 2 data/validation error, 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dlr::cli
