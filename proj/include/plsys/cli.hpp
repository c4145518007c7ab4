#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace plsys::cli {

enum ExitCode { ok = 0, validation_failure = 1, parse_error = 2 };

/// Runs one command line. args[0] is the program name. Reports go to `out`
/// (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plsys::cli
