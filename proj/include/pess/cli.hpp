#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pess {

/// Runs the `pess` command line (args exclude the program name). Exit codes:
/// 0 success, 1 usage or input error, 2 request rejected.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace pess
