#pragma once

namespace fairflow {

// Entry point of the command-line driver. Exit codes: 0 success,
// 1 failed certification, 2 invalid input or usage.
int run_cli(int argc, const char* const* argv);

}  // namespace fairflow
