#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace schurlab::cli {

enum ExitCode : int { kPass = 0, kCertificationFailure = 1, kUsageError = 2 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schurlab::cli
