#ifndef FSCO_CLI_HPP
#define FSCO_CLI_HPP

#include <string>
#include <vector>

namespace fsco::cli {

/// Full command-line driver, callable in-process: `args` excludes the
/// program name. Returns the process exit code; never throws.
int run_cli(const std::vector<std::string>& args);

}  // namespace fsco::cli

#endif  // FSCO_CLI_HPP
