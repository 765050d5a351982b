#include <iostream>

#include "fedpart/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fedpart::dispatch(args, std::cout, std::cerr);
}
