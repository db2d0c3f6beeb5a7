#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kummer::cli {

// Exit codes: 0 success, 1 negative decision (report carries a witness), 2 input error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace kummer::cli
