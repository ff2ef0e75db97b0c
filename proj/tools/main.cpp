#include <iostream>
#include <string>
#include <vector>

#include "cli_runner.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return icorr::cli::run_cli(args, std::cout, std::cerr);
}
