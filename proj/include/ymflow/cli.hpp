#pragma once

#include <string>
#include <vector>

namespace ymflow {

// In-process entry point of the command-line driver. Returns the process
// exit code: 0 success, 1 gated-check failure, 2 usage/config error,
// 3 numerical blow-up.
int run_cli(int argc, const char* const* argv);

// Convenience overload for tests; args exclude nothing (args[0] is the
// program name, as in main()).
int run_cli(const std::vector<std::string>& args);

}  // namespace ymflow
