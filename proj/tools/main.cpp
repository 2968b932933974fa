#include <iostream>
#include <string>
#include <vector>

#include "padicfhe/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return padicfhe::cli::run_command(args, std::cout, std::cerr);
}
