#include <iostream>
#include <string>
#include <vector>

#include "isoalloc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return isoalloc::cli::run(args, std::cout, std::cerr);
}
