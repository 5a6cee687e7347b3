// Command-line front end. Exit codes: 0 ok, 2 usage, 3 size guard, 4 numerical check failed.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace scartower {

inline constexpr const char* kVersion = "0.1.0";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scartower
