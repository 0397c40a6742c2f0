#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace orc::cli {

/// Exit codes: 0 ok, 1 compare exceeded its tolerance, 2 configuration or
/// input error, 3 solver error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orc::cli
