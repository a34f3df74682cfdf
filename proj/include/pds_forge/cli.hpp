#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pds {

/// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,
    exit_domain = 3,
    exit_inconclusive = 4,
};

/// Entry point of the pds_forge tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pds
