#include <iostream>

#include "nsolit_cli/cli.hpp"

int main(int argc, char** argv) {
  return nsolit::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
