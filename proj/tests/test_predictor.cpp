#include <doctest.h>

#include "qmod/predictor.hpp"

#include <cmath>

using namespace qmod;

namespace {

double d(const Real& x) { return x.convert_to<double>(); }

PredictionReport synthetic(long n, const Real& ratio, const Real& gap) {
  PredictionReport r;
  r.n = n;
  r.ratio_closed = ratio;
  r.log_closed = 0;
  r.log_saddle = gap;
  return r;
}

}  // namespace

TEST_CASE("log_big on small and huge integers") {
  CHECK(abs(log_big(mpz_class(12345)) - log(Real(12345))) < Real("1e-45"));
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 10, 1000);
  CHECK(abs(log_big(big) - 1000 * log(Real(10))) < Real("1e-40"));
  mpz_class odd = big * 7 + 3;
  CHECK(abs(log_big(odd) - log(Real(7)) - 1000 * log(Real(10))) < Real("1e-28"));
  CHECK_THROWS_AS(log_big(mpz_class(0)), PredictorError);
  CHECK_THROWS_AS(log_big(mpz_class(-5)), PredictorError);
}

TEST_CASE("saddle solves A/rho^2 = n") {
  const auto& m = family("c").model();
  for (long n : {1L, 10L, 1000L}) {
    const Real r = solve_saddle(m, n);
    CHECK(abs(m.A / (r * r) - n) < Real("1e-40") * n);
  }
  CHECK_THROWS_AS(solve_saddle(m, 0), PredictorError);
}

TEST_CASE("family registry") {
  const auto names = family_names();
  for (const char* n : {"c", "h1star", "h2", "h3", "d2", "j2inv", "j2invsq", "j3cubeinv", "j4main", "d4"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  try {
    family("nosuch");
    FAIL("expected an error");
  } catch (const PredictorError& e) {
    CHECK(std::string(e.what()).find("d2") != std::string::npos);
  }
}

TEST_CASE("family values match printed coefficients") {
  const Family& c = family("c");
  const QSeries j = c.build(3);
  CHECK(family_value(c, j, 1) == 196884);
  CHECK(family_value(c, j, 2) == 21493760);

  const Family& d2 = family("d2");
  const QSeries s = d2.build(4);
  for (long n = 1; n <= 4; ++n) CHECK(family_value(d2, s, n) > 0);

  Family wrong = c;
  wrong.sign_of = [](long) { return -1; };
  CHECK_THROWS_AS(family_value(wrong, j, 1), SignPatternError);
}

TEST_CASE("predict is consistent with the exact coefficient") {
  const Family& c = family("c");
  const PredictionReport r = predict(c, 5);
  CHECK(r.n == 5);
  CHECK(abs(r.log_exact - log(Real("333202640600"))) < Real("1e-30"));
  CHECK(abs(r.ratio_closed - exp(r.log_exact - r.log_closed)) < Real("1e-30"));
  CHECK(r.sign_ok);
  CHECK_THROWS_AS(predict(family("j2invsq"), 1), PredictorError);
}

TEST_CASE("summarize detects band, trend and halving") {
  std::vector<PredictionReport> good, flat, out;
  for (long n = 100; n <= 1000; n += 100) {
    good.push_back(synthetic(n, 1 + 1 / sqrt(Real(n)), 1 / Real(n)));
    flat.push_back(synthetic(n, Real("1.1"), Real("0.01")));
    out.push_back(synthetic(n, n == 500 ? Real("2.5") : Real(1), 0));
  }
  const auto g = summarize(good);
  CHECK(g.in_band);
  CHECK(g.trend_ok);
  CHECK(g.halved);
  CHECK(g.gap_decreasing);
  CHECK(d(g.slope) == doctest::Approx(1.0).epsilon(1e-12));

  const auto f = summarize(flat);
  CHECK(f.in_band);
  CHECK_FALSE(f.halved);
  CHECK(abs(f.slope) < Real("1e-30"));
  CHECK_FALSE(summarize(out).in_band);

  good[4].log_saddle = 1;
  CHECK_FALSE(summarize(good).gap_decreasing);
}

TEST_CASE("sweep of c: in band, trending, halved, deterministic") {
  const Family& c = family("c");
  const auto a = sweep(c, 100, 1000, 100);
  const auto b = sweep(c, 100, 1000, 100);
  REQUIRE(a.reports.size() == 10);
  CHECK(a.summary.in_band);
  CHECK(a.summary.trend_ok);
  CHECK(a.summary.halved);
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].n == 100 + 100 * static_cast<long>(i));
    CHECK(a.reports[i].log_exact == b.reports[i].log_exact);
    CHECK(a.reports[i].ratio_saddle == b.reports[i].ratio_saddle);
  }
  CHECK_THROWS_AS(sweep(c, 0, 10, 1), PredictorError);
  CHECK_THROWS_AS(sweep(c, 10, 5, 1), PredictorError);
}

TEST_CASE("d2 and d4 saddle ratios approach 1") {
  for (const char* name : {"d2", "d4"}) {
    const Family& f = family(name);
    const auto s = sweep(f, 100, 800, 350);
    REQUIRE(s.reports.size() == 3);
    for (const auto& r : s.reports) CHECK(r.sign_ok);
    const Real first = abs(s.reports.front().ratio_saddle - 1);
    const Real last = abs(s.reports.back().ratio_saddle - 1);
    CHECK(last < first);
    CHECK(last < Real("0.02"));
  }
}

TEST_CASE("epsilon hypothesis is bounded by K sqrt(rho)") {
  const std::vector<Real> rhos{Real("0.1"), Real("0.05"), Real("0.02"), Real("0.01")};
  for (const char* name : {"c", "d2", "j2invsq", "d4"}) {
    const auto e = epsilon_check(family(name), rhos);
    CHECK(e.rows.size() == 4);
    CHECK(e.decreasing);
    for (const auto& r : e.rows) CHECK(abs(r.eps) <= e.K * sqrt(r.rho) * (1 + Real("1e-30")) + Real("1e-30"));
  }
}

TEST_CASE("table 2 rows") {
  CHECK(table2_rows().size() == 11);
  const auto rep = verify_table2({Real("0.01")}, {Real("0.01")});
  CHECK(rep.checks.size() == 11);
  for (const auto& c : rep.checks) {
    INFO(c.label);
    CHECK(c.passed);
  }
  CHECK(rep.passed());
  CHECK_THROWS_AS(verify_table2({Real("0.2")}, {Real("0.01")}), PredictorError);
  CHECK_THROWS_AS(verify_table2({Real("0.01")}, {}), PredictorError);
}

TEST_CASE("sign patterns and main-term dominance") {
  const auto rep = verify_sign_patterns(150);
  CHECK(rep.checks.size() == 5);
  CHECK(rep.passed());

  const auto rows = main_term_dominance({50, 100, 200});
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.rel_rest < Real("1e-10"));
  CHECK(rows[0].h1_minus_h2 < rows[2].h1_minus_h2);
}
