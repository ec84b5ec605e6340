#include <iostream>
#include <string>
#include <vector>

#include "lipsel/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lipsel::run(args, std::cout, std::cerr);
}
