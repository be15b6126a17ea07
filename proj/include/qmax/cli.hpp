#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmax::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,    // bad arguments or input files
    kExitNumeric = 3,  // saturation under --strict
};

/// Runs one `qmax` command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmax::cli
