#pragma once

#include <string>
#include <vector>

namespace hyperroad {

// Full command dispatcher; args exclude the program name. Returns the process
// exit code: 0 success, 2 file problems, 3 config problems, 4 numerical abort.
int run_cli(const std::vector<std::string>& args);

}  // namespace hyperroad
