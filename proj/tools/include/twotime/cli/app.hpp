#pragma once

namespace twotime::cli {

// Full command-line entry point. Exit codes: 0 success, 1 config or
// argument validation failure, 2 runtime fault during scenario
// execution.
int run_app(int argc, const char* const* argv);

}  // namespace twotime::cli
