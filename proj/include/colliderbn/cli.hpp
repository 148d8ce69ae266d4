#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace colliderbn {

struct CliEnvironment {
  // ANSI styling for monitor bars; main() decides from NO_COLOR and the tty.
  bool color = false;
};

/// True unless NO_COLOR is set (to anything) or stdout is not a terminal.
bool color_enabled(const char* no_color, bool stdout_is_tty);

/// Runs one command. `args` excludes the program name. Exit codes: 0 success,
/// 1 domain error ("error: CODE: message" on err), 2 usage error.
/// A model or data path of "-" reads `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err, const CliEnvironment& env = {});

}  // namespace colliderbn
