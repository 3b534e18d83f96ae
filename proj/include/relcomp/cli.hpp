#pragma once

namespace relcomp {

// Exit codes: 0 success, 2 config error, 3 data error, 4 internal error.
// Errors are reported as one JSON line on stderr.
int run_cli(int argc, const char* const* argv);

}  // namespace relcomp
