#include <iostream>
#include <string>
#include <vector>

#include "informality/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return informality::cli::run(args, std::cout, std::cerr);
}
