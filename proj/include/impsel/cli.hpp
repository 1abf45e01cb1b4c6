#pragma once

namespace impsel {

// Command-line surface; exits 0 on success, 1 on audit failure, 2 on input
// errors (bad flags, malformed files, infeasible budgets).
int cli_main(int argc, const char* const* argv);

}  // namespace impsel
