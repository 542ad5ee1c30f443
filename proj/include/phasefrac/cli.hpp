#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "phasefrac/error.hpp"

namespace phasefrac {

/// 0 ok, 1 invariant violated (or node under --strict-nodes), 2 parse/validation, 3 numerical.
int exit_code_for(ErrorCode code);

/// Runs the command line. args excludes the program name. Console output goes to out/err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phasefrac
