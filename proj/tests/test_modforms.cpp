#include <doctest.h>

#include "oracles.hpp"
#include "qmod/modforms.hpp"

using namespace qmod;

namespace {

void expect_coeffs(const QSeries& s, const std::vector<std::pair<mpq_class, const char*>>& want) {
  for (const auto& [e, v] : want) {
    INFO("exponent " << e.get_str());
    CHECK(s.coeff(e) == mpq_class(v));
  }
}

mpq_class half(long k) { return mpq_class(k, 2); }

}  // namespace

TEST_CASE("E4 against divisor-sum oracle") {
  const QSeries e = e4(60);
  CHECK(e.coeff(0) == 1);
  CHECK(e.coeff(2) == 2160);
  for (long n = 1; n <= 60; ++n) CHECK(e.coeff(n) == 240 * oracle::divisor_sigma(3, n));
}

TEST_CASE("j leading coefficients") {
  const QSeries j = j_function(5);
  expect_coeffs(j, {{-1, "1"}, {0, "744"}, {1, "196884"}, {2, "21493760"}, {3, "864299970"}});
  CHECK_THROWS_AS(j.coeff(6), SeriesError);
  CHECK_THROWS_AS(j.coeff(mpq_class(3, 2)), SeriesError);
}

TEST_CASE("theta leading terms") {
  const QSeries t0 = theta(0, 6);
  expect_coeffs(t0, {{0, "1"}, {half(1), "-2"}, {1, "0"}, {2, "2"}, {half(9), "-2"}});
  const QSeries t2 = theta(2, 4);
  CHECK(t2.vmin() == 1);
  expect_coeffs(t2, {{mpq_class(1, 8), "2"}, {mpq_class(9, 8), "2"}, {mpq_class(17, 8), "0"},
                     {mpq_class(25, 8), "2"}});
}

TEST_CASE("theta sum and product modes agree") {
  for (int w : {0, 2, 3}) {
    auto c = compare(theta(w, 100, ThetaMode::sum), theta(w, 100, ThetaMode::product));
    CHECK(c.equal);
    CHECK(c.checked_through == 100);
  }
}

TEST_CASE("eta routes agree") {
  CHECK(compare(eta(60), eta_scaled(1, 60)).equal);
  CHECK(compare(substitute(eta(30), 2, 1, 1), eta_scaled(2, 60)).equal);
  const QSeries q = eta_quotient({{1, 1}}, 10);
  CHECK(q.denom() == 24);
  CHECK(q.vmin() == 1);
  CHECK(compare(q, eta(10)).equal);
  const QSeries j2 = eta_quotient({{1, 24}, {2, -24}}, 10);
  CHECK(j2.denom() == 1);
  CHECK(j2.vmin() == -1);
}

TEST_CASE("H series golden coefficients") {
  expect_coeffs(h_series(1, 5), {{-1, "1"}, {0, "104"}, {1, "276"}, {2, "-2048"}, {3, "11202"},
                                 {4, "-49152"}, {5, "184024"}});
  const QSeries h2 = h_series(2, 4);
  CHECK(h2.denom() == 2);
  expect_coeffs(h2, {{0, "256"}, {1, "131072"}, {2, "11534336"}, {3, "441974784"}, {4, "10208935936"},
                     {half(1), "0"}, {half(3), "0"}});
  expect_coeffs(h_series(3, 5), {{0, "0"}, {1, "65536"}, {2, "9961472"}, {3, "422313984"},
                                 {4, "10036969472"}, {5, "166007275520"}});
}

TEST_CASE("branch golden coefficients") {
  expect_coeffs(h_branch(2, -1, 2), {{0, "128"}, {half(1), "-4096"}, {1, "65536"}, {half(3), "-704512"},
                                     {2, "5767168"}});
  expect_coeffs(h_branch(2, 1, 2), {{half(1), "4096"}, {half(3), "704512"}, {2, "5767168"}});
  expect_coeffs(h_branch(3, -1, 3), {{1, "32768"}, {half(3), "-524288"}, {2, "4980736"},
                                     {half(5), "-35651584"}, {3, "211156992"}});
  expect_coeffs(h_branch(3, 1, 3), {{half(3), "524288"}, {half(5), "35651584"}});
  const QSeries sum = h_branch(3, 1, 3) + h_branch(3, -1, 3);
  CHECK(sum.coeff(1) == 65536);
  CHECK(sum.coeff(half(3)) == 0);
}

TEST_CASE("Hauptmoduln") {
  expect_coeffs(hauptmodul(2, 5), {{-1, "1"}, {0, "-24"}, {1, "276"}, {2, "-2048"}, {3, "11202"},
                                   {4, "-49152"}, {5, "184024"}});
  expect_coeffs(hauptmodul(4, 9), {{-1, "1"}, {0, "-8"}, {1, "20"}, {2, "0"}, {3, "-62"}, {5, "216"},
                                   {7, "-641"}, {9, "1636"}});
  for (int n : hauptmodul_levels()) CHECK(hauptmodul(n, 3).coeff(-1) == 1);
  CHECK(hauptmodul_levels().size() == 8);
  CHECK_THROWS_AS(hauptmodul(6, 3), std::invalid_argument);
}

TEST_CASE("j4 star") {
  expect_coeffs(j4_star(9), {{-1, "-1"}, {0, "0"}, {1, "20"}, {3, "62"}, {5, "216"}, {7, "641"},
                             {9, "1636"}});
  CHECK(verify_j4_star(60).passed());
}

TEST_CASE("Table 1 and Phi identities at moderate order") {
  for (int n : hauptmodul_levels()) {
    INFO("N=" << n);
    auto r = verify_table1(n, 30);
    CHECK(r.passed());
  }
  CHECK(verify_table1(2, 30).checks.size() == 2);
  for (int n : {4, 9, 25}) CHECK(verify_phi_eta(n, 30).passed());
  CHECK_THROWS_AS(verify_phi_eta(2, 10), std::invalid_argument);
  // 1/(j4+16) starts at q^1
  auto inv = invert(evaluate(*hauptmodul_record(4).phi, hauptmodul(4, 10)));
  CHECK(inv.vmin() == 1);
}

TEST_CASE("constant term of (j2+256)^3/j2^2 is 744") {
  RationalExpr e = hauptmodul_record(2).j_in_terms;
  CHECK(evaluate(e, hauptmodul(2, 4)).coeff(0) == 744);
}

TEST_CASE("a wrong table entry is caught with its exponent") {
  RationalExpr e = hauptmodul_record(2).j_in_terms;
  e.numer[0].coeffs[0] = 255;
  auto c = check_equal("tampered", evaluate(e, hauptmodul(2, 10)), j_function(10));
  CHECK_FALSE(c.passed);
  REQUIRE(c.first_mismatch);
  CHECK(*c.first_mismatch == 0);
}

TEST_CASE("quartic identity") {
  auto [a, b] = quartic_identity_sides(1, 0, 0);
  CHECK(a == 1);
  CHECK(b == 1);
  auto [c, d] = quartic_identity_sides(1, 1, 1);
  CHECK(c == -3);
  CHECK(d == -3);
}

TEST_CASE("verification suites pass at moderate order") {
  auto t = verify_theta_identities(40);
  for (const auto& c : t.checks) {
    INFO(c.name << " " << c.detail);
    CHECK(c.passed);
  }
  auto h = verify_h_closed_forms(40);
  for (const auto& c : h.checks) {
    INFO(c.name << " " << c.detail);
    CHECK(c.passed);
  }
  CHECK(verify_dominance(100).passed());
}
