#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "leaklint/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return leaklint::cli::run(args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "leaklint: " << e.what() << "\n";
    return 2;
  }
}
