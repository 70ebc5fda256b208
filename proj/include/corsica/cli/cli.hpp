#pragma once

#include <iosfwd>

namespace corsica::cli {

/// Runs the command line. Exit codes: 0 success, 1 usage error, 2 data
/// error. Output and diagnostics go to the given streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace corsica::cli
