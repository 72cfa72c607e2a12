#pragma once

#include <iosfwd>

namespace batchrips {

// Runs one CLI invocation. Results go to `out`, diagnostics to `err`.
// Exit codes: 0 ok, 1 input error (including bad flags), 2 contract violation.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace batchrips
