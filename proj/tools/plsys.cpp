#include <iostream>

#include "plsys/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return plsys::cli::run(args, std::cout, std::cerr);
}
