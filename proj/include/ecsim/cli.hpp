#ifndef ECSIM_CLI_HPP
#define ECSIM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ecsim::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitViolations = 1,
  kExitInputError = 2,
};

// Runs `ecsim <args...>`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ecsim::cli

#endif  // ECSIM_CLI_HPP
