#include <iostream>

#include "eqcheck/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return eqcheck::run(args, std::cout, std::cerr);
}
