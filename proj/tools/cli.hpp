#pragma once

#include <iosfwd>

namespace neoclust::cli {

// Entry point of the `neoclust` tool. Returns the process exit code; normal
// output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace neoclust::cli
