#include "curvecur/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return curvecur::cli::cmd_dispatch(args, std::cout, std::cerr);
}
