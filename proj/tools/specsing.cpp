#include <iostream>

#include "specsing/cli/app.hpp"

int main(int argc, char** argv) {
  return specsing::cli::cli_main(argc, argv, std::cout, std::cerr);
}
