#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

// Command-line front end: expand, verify, predict, gaussian, em-check.
// Exit codes: 0 success, 1 verification failure, 2 usage error.
namespace qmod {

struct RunConfig {
  std::string command;
  std::string name;  // series, suite, family, form or quantity
  long order = 20;
  long level = 0;
  long a = 0, b = 0, c = 0;  // g(a,b,c) or P(m=a, a=b)
  long n_from = 0, n_to = 0, step = 1;
  std::vector<std::string> rhos, lambdas;
  long theta_points = 1024;
  std::string format = "table";
  std::string output;
  long precision = 0;  // 0 keeps the current working precision
  std::uint64_t seed = 0;
};

constexpr long kMaxOrder = 5000;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Names accepted by `expand --series`.
std::vector<std::string> series_names();

}  // namespace qmod
