#include <iostream>

#include "lfsr/cli.hpp"

int main(int argc, char** argv) {
  return lfsr::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
