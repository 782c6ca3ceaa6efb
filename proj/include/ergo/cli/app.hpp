#pragma once

#include <iosfwd>

namespace ergo::cli {

/// Full command-line entry point. Returns the process exit code: 0 success,
/// 2 invalid input (error JSON on err), 3 numerical non-convergence.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ergo::cli
