#pragma once

#include <iosfwd>

namespace qrabi::cli {

/// Exit codes: 0 success, 1 validation failure, 2 configuration error, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qrabi::cli
