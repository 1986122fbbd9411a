#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fraisse::cli {

// Runs one invocation; args excludes the program name. Reports go to `out`,
// diagnostics to `err`. Exit codes: 0 success or verdict true, 1 verdict
// false, 2 usage or parse error, 3 bounded search inconclusive.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fraisse::cli
