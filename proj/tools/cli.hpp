#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace symmkern::cli {

enum ExitCode : int {
  kOk = 0,
  kOracleBound = 1,
  kConfigError = 2,
  kPsdFailure = 3,
  kRuntimeError = 4,
};

// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symmkern::cli
