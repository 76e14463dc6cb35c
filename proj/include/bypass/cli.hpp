#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bypass {

/// Exit codes: 0 success, 1 data or numeric failure, 2 configuration or usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitConfig = 2;

/// Runs one CLI invocation. args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace bypass
