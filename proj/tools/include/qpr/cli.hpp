#pragma once

#include <iosfwd>

namespace qpr::cli {

/// Runs the `qpr` command line. Returns 0 on success, 1 on a usage error and
/// 2 when the requested work fails.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qpr::cli
