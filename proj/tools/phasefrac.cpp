#include <iostream>
#include <string>
#include <vector>

#include "phasefrac/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return phasefrac::run_cli(args, std::cout, std::cerr);
}
