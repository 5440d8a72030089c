#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lfsr::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kIo = 3,
  kDivergence = 4,
};

// Runs the command line (args excludes the program name). Returns a process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Flat `key = value` config file to `--key=value` tokens. Blank lines and '#' comments are
// skipped; underscores in keys become hyphens.
std::vector<std::string> config_tokens(const std::string& path);

}  // namespace lfsr::cli
