#include <iostream>

#include "profin/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return profin::run_cli(args, std::cout, std::cerr);
}
