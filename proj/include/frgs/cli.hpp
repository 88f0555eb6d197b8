#pragma once

#include <string>
#include <vector>

namespace frgs {
namespace cli {

/// Subcommands: solve, scan-subadd, check, dilate, diagnose.
/// Exit codes: 0 success, 1 usage error, 2 validation error, 3 solver
/// stall/failure.
int run(const std::vector<std::string>& args);

int run(int argc, char** argv);

}  // namespace cli
}  // namespace frgs
