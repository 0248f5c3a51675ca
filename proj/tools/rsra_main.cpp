#include <iostream>
#include <string>
#include <vector>

#include "rsra/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return rsra::cli::run_main(args, std::cout, std::cerr);
}
