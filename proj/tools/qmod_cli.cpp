#include "qmod/cli.hpp"
#include "qmod/real.hpp"

#include <iostream>

int main(int argc, char** argv) {
  try {
    qmod::init_precision_from_env();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return qmod::run_cli(argc, argv, std::cout, std::cerr);
}
