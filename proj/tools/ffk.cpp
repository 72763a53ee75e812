#include <iostream>
#include <string>
#include <vector>

#include "ffk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ffk::cli::run(args, std::cout, std::cerr);
}
