#pragma once

#include <iosfwd>

namespace uregion {

// Entry point of the `uregion` tool. Returns 0 on success, 2 on usage
// errors and 1 on computation errors; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uregion
