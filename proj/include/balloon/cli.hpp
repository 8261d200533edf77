#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace balloon::cli {

// Runs one command (args exclude the program name). Exit codes:
//   0 success, 1 computational failure, 2 I/O failure, 64 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace balloon::cli
