#pragma once

#include <string>
#include <vector>

namespace expdecomp {

// Exit codes: 0 success, 1 input/usage error, 2 verification failure.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace expdecomp
