#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace icorr::cli {

/// Full command-line entry point (argv without the program name).
/// Returns the process exit code: 0 on success, 1 on computation/verification
/// failure, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace icorr::cli
