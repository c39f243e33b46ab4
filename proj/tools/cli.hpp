#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdi::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kIo = 2,
};

// args excludes the program name. Success prints one JSON line to `out`;
// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdi::cli
