#ifndef CLUSTCONS_CLI_APP_HPP
#define CLUSTCONS_CLI_APP_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace clustcons::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitRefused = 2;

/// Runs one invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace clustcons::cli

#endif
