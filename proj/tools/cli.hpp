#pragma once

#include <string>
#include <vector>

namespace spiral::cli {

// Full command-line entry point.  Exit codes: 0 success, 1 usage,
// 2 numeric/validation failure, 3 I/O.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

}  // namespace spiral::cli
