#include <iostream>

#include "onewayqc_cli/cli.hpp"

int main(int argc, char** argv) {
  return onewayqc_cli::run_cli(argc, argv, std::cout, std::cerr);
}
