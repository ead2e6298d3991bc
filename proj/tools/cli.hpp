#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scma::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kNotConverged = 2,
  kSolverFailure = 3,
};

// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a:step:b" (inclusive), "a,b,c" or a single value.
std::vector<double> parse_grid(const std::string& text);

}  // namespace scma::cli
