#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kgwalk::cli {

// Runs one invocation (args excludes the program name). Returns the process
// exit status; results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kgwalk::cli
