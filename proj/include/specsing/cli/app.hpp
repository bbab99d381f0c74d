#pragma once

#include <iosfwd>

namespace specsing::cli {

// Full command-line entry point. Results go to `out` (or the --out file),
// diagnostics to `err`. Returns 0 on success, 1 on configuration errors and
// 2 when numerical failures were recorded.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specsing::cli
