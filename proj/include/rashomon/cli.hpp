#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rashomon::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Process exit statuses.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitData = 3,
  kExitTimeout = 4,
};

// Entry point shared by the `rashomon` binary and the tests. args[0] is the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rashomon::cli
