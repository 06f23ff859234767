#pragma once

#include <string>
#include <vector>

namespace isildpc {

// Entry point behind the isildpc binary; also driven directly by tests.
// Returns 0 on success, 1 on domain errors, 2 on usage errors.
int run_cli(std::vector<std::string> args);

}  // namespace isildpc
