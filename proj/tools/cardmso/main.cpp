#include <iostream>

#include "cardmso/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cardmso::cli::run(args, std::cout, std::cerr);
}
