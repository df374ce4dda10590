#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homoglab::cli {

enum ExitCode : int {
  ok = 0,
  validation_error = 1,
  numerical_failure = 2,
  usage_error = 64,
  io_error = 74,
};

/// Runs one subcommand. argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace homoglab::cli
