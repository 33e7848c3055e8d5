#pragma once

namespace bilateral {

/// Entry point behind the `bilateral` binary; returns the process exit code.
/// Exit codes: 0 success; 1 unexpected failure; 2 formula parse error
/// (including unknown symbols and arity mismatches); 3 unknown atom /
/// uncached miss; 4 backend failure; 5 validity budget exceeded; 6
/// configuration or usage error; 7 empty records / undefined metric; 8
/// dataset error; 9 file I/O or serialization error.
int run_cli(int argc, const char* const* argv);

}  // namespace bilateral
