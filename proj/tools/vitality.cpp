#include <iostream>
#include <string>
#include <vector>

#include "vitality_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vitality::cli::run_cli(args, std::cout, std::cerr);
}
