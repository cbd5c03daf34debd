#pragma once

#include <string>
#include <vector>

namespace ugvq {

inline constexpr const char* kToolVersion = "0.1.0";

// Runs one CLI invocation. `args` excludes the program name. Returns the
// process exit code: 0 success, 2 input error, 3 numeric failure.
int run_cli(const std::vector<std::string>& args);

} // namespace ugvq
