#pragma once

#include <iosfwd>

namespace dnscatter::cli {

// Exit codes: 0 success, 1 failed validation checks, 2 bad input, 3 solver failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dnscatter::cli
