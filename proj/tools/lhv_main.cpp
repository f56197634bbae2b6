#include <iostream>
#include <string>
#include <vector>

#include "lhv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return lhv::cli::run(args, std::cout, std::cerr);
}
