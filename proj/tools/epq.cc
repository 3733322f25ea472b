#include <iostream>

#include "epq/cli/commands.hpp"

int main(int argc, char** argv) {
  return epq::cli::run_cli(argc, argv, std::cout, std::cerr);
}
