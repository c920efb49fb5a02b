#include <iostream>

#include "zinc_bridge/cli.hpp"

int main(int argc, char** argv) {
  return zb::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
