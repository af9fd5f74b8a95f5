#pragma once

#include <ostream>

namespace ctr {

// Entry point of the `ctr` tool. Returns the process exit code: 0 on
// success, 1 on a domain error or failed assertion, 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ctr
