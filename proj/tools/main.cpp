#include <iostream>
#include <string>
#include <vector>

#include "sicladder/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return sicladder::cli::dispatch(args, std::cout, std::cerr);
}
