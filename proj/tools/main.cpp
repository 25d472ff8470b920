#include <iostream>
#include <string>
#include <vector>

#include "maslov/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return maslov::run_cli(args, std::cout, std::cerr);
}
