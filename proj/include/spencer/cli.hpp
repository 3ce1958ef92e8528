#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spencer {

enum ExitCode { kExitOk = 0, kExitParse = 1, kExitCap = 2, kExitArgs = 3 };

/// Runs one command line (without the program name); the report goes to
/// `out`, text-mode errors to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spencer
