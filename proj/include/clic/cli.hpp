#pragma once

#include <string>
#include <vector>

namespace clic::cli {

// Runs one CLI invocation (args exclude the program name). Exit codes:
// 0 ok, 2 I/O error, 3 config error, 4 numeric abort / failed check,
// 5 config-hash mismatch, 6 unknown id.
int run(const std::vector<std::string>& args);

} // namespace clic::cli
