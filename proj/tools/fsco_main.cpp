#include <string>
#include <vector>

#include "fsco_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fsco::cli::run_cli(args);
}
