#pragma once

#include <iosfwd>

namespace zerosum::cli {

/// Process exit statuses.
enum ExitCode : int { ok = 0, claim_false = 2, infeasible = 3, budget = 4, usage = 64 };

/// Runs the `zerosum` command line; all output goes to `out` and `err`.
int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

} // namespace zerosum::cli
