#include <iostream>
#include <string>
#include <vector>

#include "pgeo_tools/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pgeo::cli::run(args, std::cout, std::cerr);
}
