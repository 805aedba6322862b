#pragma once

#include <iosfwd>

namespace zerofree {

/// Entry point of the `zerofree` tool. Exit codes: 0 success, 2 precondition
/// or usage error, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zerofree
