#include <iostream>
#include <string>
#include <vector>

#include "sha3fd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sha3fd::cli::run(args, std::cin, std::cout, std::cerr);
}
