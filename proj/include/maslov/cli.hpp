#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace maslov {

// Exit codes: 0 success, 1 usage or config error, 2 invariance violation, 3 blow-up.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace maslov
