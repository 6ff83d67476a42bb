#include <iostream>

#include "idmps_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return idmps::cli::run(args, std::cout, std::cerr);
}
