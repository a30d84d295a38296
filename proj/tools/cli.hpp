#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lexlda::tools {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitUsageError = 2,
};

// Runs the lexlda command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Reads a key=value config file ("#" comments, optional quotes, "[section]"
// headers) and returns "--key=value" arguments for keys that apply to
// `subcommand` and are not already present in `args`. Underscores in keys
// become dashes.
std::vector<std::string> config_arguments(const std::filesystem::path& path,
                                          const std::string& subcommand,
                                          const std::vector<std::string>& args);

}  // namespace lexlda::tools
