#include <iostream>
#include <string>
#include <vector>

#include "rightangle/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rightangle::cli::run(args, std::cout, std::cerr);
}
