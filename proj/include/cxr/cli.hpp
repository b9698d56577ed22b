#pragma once

#include <iosfwd>

namespace cxr::cli {

// Command-line driver: parses argv, dispatches the verb, and writes results
// to `out` with diagnostics and progress on `err`. Returns 0 on success, 1
// for validation/configuration problems (bad flags, missing files, broken
// corpus), 2 for runtime failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Bound to the process streams.
int run(int argc, const char* const* argv);

}  // namespace cxr::cli
