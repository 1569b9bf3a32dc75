#pragma once

#include "magbottle/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace magbottle {

/// Process exit status for a library error: 2 NotQuantizable, 3 invalid mesh,
/// 4 solver non-convergence, 1 anything else.
int exit_code_for(ErrorCode code);

/// Runs one command line (without the program name). Results go to `out` or the
/// --output file; diagnostics go to `err` as `ERR <exit> <ErrorName>: <detail>`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace magbottle
