#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace strichartz::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2 };

// `args` excludes the program name. The report (or CSV table) goes to `out`
// unless --out names a file; usage text and diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace strichartz::cli
