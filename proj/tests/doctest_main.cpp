#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "qmod/real.hpp"

int main(int argc, char** argv) {
  qmod::init_precision_from_env();
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
