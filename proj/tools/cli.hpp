#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kpls::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNumericalError = 2, kInternalError = 3 };

// Entry point shared by the executable and the tests; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kpls::cli
