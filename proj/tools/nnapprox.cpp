#include <iostream>
#include <string>
#include <vector>

#include "nnapprox/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nnapprox::run_cli(args, std::cout, std::cerr);
}
