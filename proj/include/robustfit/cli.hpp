#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace robustfit {

//! Runs the command-line front end on the given arguments (without argv[0]).
//! Exit codes: 0 success, 1 input error, 2 numerical failure,
//! 3 internal self-check mismatch.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace robustfit
