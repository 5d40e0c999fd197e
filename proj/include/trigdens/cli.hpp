#pragma once

#include <string>
#include <vector>

namespace trigdens {

// Full command-line front end. Returns the process exit code:
//   0 success, 2 flag/config errors, 3 I/O or data-format errors.
int cli_main(const std::vector<std::string>& args);
int cli_main(int argc, char** argv);

}  // namespace trigdens
