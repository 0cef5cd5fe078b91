#include <iostream>
#include <string>
#include <vector>

#include "rashomon/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rashomon::cli::run(args, std::cout, std::cerr);
}
