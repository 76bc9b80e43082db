#include <doctest.h>

#include "qmod/cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace qmod;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qmod");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("expand j as json") {
  const auto r = run({"expand", "--series", "j", "--order", "5", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const std::vector<std::string> want{"1", "744", "196884", "21493760", "864299970", "20245856256", "333202640600"};
  CHECK(j["coeffs"].get<std::vector<std::string>>() == want);
  CHECK(j["exponents"].front() == "-1");
  CHECK(j["exponents"].back() == "5");
  CHECK(j["series"] == "j");
}

TEST_CASE("expand H3 in table form") {
  const auto r = run({"expand", "--series", "H3", "--order", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("65536*q + 9961472*q^2") != std::string::npos);
}

TEST_CASE("expand csv header and rows") {
  const auto r = run({"expand", "--series", "j2", "--order", "3", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 6);
  CHECK(l[0] == "exponent,coefficient");
  CHECK(l[1] == "-1,1");
}

TEST_CASE("expand errors") {
  const auto r = run({"expand", "--series", "nosuch"});
  CHECK(r.code == 2);
  CHECK(r.err.find("H2star") != std::string::npos);
  CHECK(run({"expand", "--series", "j", "--order", "5001"}).code == 2);
  CHECK(run({"expand"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify suites") {
  const auto t1 = run({"verify", "--suite", "table1", "--order", "40"});
  CHECK(t1.code == 0);
  CHECK(t1.out.find("8/8 levels passed") != std::string::npos);
  CHECK(run({"verify", "--suite", "theta", "--order", "60", "--seed", "3"}).code == 0);
  CHECK(run({"verify", "--suite", "table1", "--level", "25", "--order", "30"}).code == 0);
  CHECK(run({"verify", "--suite", "table1", "--level", "6"}).code == 2);
  CHECK(run({"verify", "--suite", "nosuch"}).code == 2);

  const auto t2 = run({"verify", "--suite", "table2", "--rho", "0.01", "--format", "json"});
  REQUIRE(t2.code == 0);
  const auto j = nlohmann::json::parse(t2.out);
  CHECK(j["passed"] == true);
  CHECK(j["checks"].size() == 11);
  CHECK(run({"verify", "--suite", "table2", "--rho", "0.5"}).code == 2);
  CHECK(run({"verify", "--suite", "table2", "--rho", "0.01,0.02", "--lambda", "0.01"}).code == 2);
}

TEST_CASE("predict c csv: rows and summary") {
  const auto r = run({"predict", "--family", "c", "--from", "100", "--to", "1000", "--step", "100", "--format", "csv"});
  CHECK(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() >= 11);
  CHECK(l[0] == "n,rho_n,log_exact,log_saddle,log_closed,ratio_saddle,ratio_closed,sign_ok");
  CHECK(l[1].rfind("100,", 0) == 0);
  CHECK(l[10].rfind("1000,", 0) == 0);
  CHECK(r.out.find("# criteria_met=true") != std::string::npos);
}

TEST_CASE("predict single row, json, guards") {
  const auto r = run({"predict", "--family", "c", "--from", "5", "--to", "5", "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["rows"].size() == 1);
  CHECK(j["rows"][0]["n"] == 5);

  const auto d4 = run({"predict", "--family", "d4", "--from", "10", "--to", "200", "--format", "json"});
  const auto jd = nlohmann::json::parse(d4.out);
  CHECK(jd["rows"].size() == 191);
  for (const auto& row : jd["rows"]) CHECK(row["sign_ok"] == true);

  CHECK(run({"predict", "--family", "c", "--from", "100", "--to", "6000"}).code == 2);
  CHECK(run({"predict", "--family", "nosuch"}).code == 2);
  CHECK(run({"predict", "--family", "j2invsq", "--from", "1", "--to", "3"}).code == 2);
}

TEST_CASE("gaussian subcommand") {
  CHECK(run({"gaussian", "--form", "H2star", "--rho", "-1"}).code == 2);
  CHECK(run({"gaussian", "--form", "H2star", "--rho", "0.1", "--points", "100"}).code == 2);
  CHECK(run({"gaussian", "--form", "g", "--a", "1", "--b", "2", "--c", "-24", "--rho", "0.1"}).code == 2);
  const auto r = run({"gaussian", "--form", "g", "--a", "1", "--b", "2", "--c", "24", "--rho", "0.1,0.07",
                      "--points", "512", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 3);
  CHECK(l[0] == "rho,sigma,l1_distance,theta_points,lyapunov_ratio");
}

TEST_CASE("em-check subcommand") {
  const auto r = run({"em-check", "--quantity", "logQ", "--rho", "0.1,0.01", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 3);
  CHECK(run({"em-check", "--quantity", "nope", "--rho", "0.1"}).code == 2);
}

TEST_CASE("precision, output file, determinism") {
  CHECK(run({"--precision", "30", "expand", "--series", "j"}).code == 2);
  const std::vector<std::string> args{"predict", "--family", "d2", "--from", "100", "--to", "300", "--step", "100",
                                      "--format", "json"};
  const auto a = run(args), b = run(args);
  CHECK(a.out == b.out);

  const std::string path = "test_cli_output.csv";
  const auto w = run({"expand", "--series", "eta", "--order", "2", "--format", "csv", "--output", path});
  CHECK(w.code == 0);
  CHECK(w.out.empty());
  std::ifstream f(path);
  std::string head;
  std::getline(f, head);
  CHECK(head == "exponent,coefficient");
  std::remove(path.c_str());
}
