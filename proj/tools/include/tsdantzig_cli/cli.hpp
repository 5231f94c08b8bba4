#pragma once

#include <iosfwd>

namespace tsdantzig::cli {

/// Exit codes: 0 success, 2 invalid configuration or arguments, 3 numerical
/// failure, 1 anything else.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsdantzig::cli
