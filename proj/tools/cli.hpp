#pragma once

#include <iosfwd>

namespace bbem::cli {

/// Exit codes: 0 success, 1 numerical failure or failed suite, 2 usage or config error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bbem::cli
