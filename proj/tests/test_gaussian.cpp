#include <doctest.h>

#include "qmod/gaussian.hpp"

#include <random>

using namespace qmod;

namespace {

double d(const Real& x) { return x.convert_to<double>(); }

std::vector<ProductForm> positive_forms() {
  return {forms::H2star(), forms::H3star(), forms::H1star(), forms::g(1, 2, 24)};
}

}  // namespace

TEST_CASE("standardized charfn at theta = 0 and on a random grid") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<long double> u(-30, 30);
  for (const auto& f : positive_forms()) {
    const Real rho("0.05");
    const long double sigma = sqrt(pf_variance(f, rho)).convert_to<long double>();
    const long double mean = pf_mean(f, rho).convert_to<long double>();
    CHECK(std::abs(standardized_charfn(f, 0.05L, sigma, mean, 0) - 1.0L) < 1e-15L);
    for (int i = 0; i < 50; ++i) CHECK(std::abs(standardized_charfn(f, 0.05L, sigma, mean, u(rng))) <= 1 + 1e-15L);
  }
}

TEST_CASE("char_deviation basic contract") {
  const auto r = char_deviation(forms::H2star(), Real("0.1"), 100);
  CHECK(r.theta_points == kMinThetaPoints);
  CHECK(r.l1_distance >= 0);
  CHECK(abs(r.sigma * r.sigma - pf_variance(forms::H2star(), Real("0.1"))) < Real("1e-40"));
  CHECK_THROWS_AS(char_deviation(forms::H2star(), Real(-1)), AsymptoticsError);
  CHECK_THROWS_AS(char_deviation(forms::H2star(), Real(0)), AsymptoticsError);
  CHECK_THROWS_AS(char_deviation(forms::g(1, 2, -24), Real("0.1")), AsymptoticsError);
}

TEST_CASE("l1 distance decreases as rho decreases") {
  for (const auto& f : {forms::H2star(), forms::g(1, 2, 24)}) {
    INFO(f.name);
    const Real a = char_deviation(f, Real("0.1"), 512).l1_distance;
    const Real b = char_deviation(f, Real("0.05"), 512).l1_distance;
    CHECK(b < a);
    CHECK(b > 0);
  }
}

TEST_CASE("grid refinement changes l1 by under 1%") {
  const Real a = char_deviation(forms::H2star(), Real("0.07"), 512).l1_distance;
  const Real b = char_deviation(forms::H2star(), Real("0.07"), 1024).l1_distance;
  CHECK(abs(a / b - 1) < Real("0.01"));
}

TEST_CASE("group moments are centered and consistent") {
  for (const auto& f : positive_forms()) {
    for (long n : {0L, 3L, 40L}) {
      const auto g = group_moments(f, Real("0.05"), n);
      CHECK(abs(g.central1) < Real("1e-40") * (1 + abs(g.k1)));
      CHECK(abs(g.central4 - g.central4_binomial) < Real("1e-30") * (1 + abs(g.k1 * g.k1 * g.k1 * g.k1)));
      CHECK(g.central4 >= 0);
      CHECK(g.k2 >= 0);
    }
  }
}

TEST_CASE("lyapunov ratio: constant form, scaling, slope") {
  ProductForm c;
  c.name = "const";
  c.coeff = 3;
  CHECK(lyapunov_fourth(c, Real("0.1")).ratio == 0);
  CHECK_THROWS_AS(lyapunov_fourth(forms::H2star(), Real("0.3")), AsymptoticsError);
  CHECK_THROWS_AS(lyapunov_fourth(forms::H2star(), Real(0)), AsymptoticsError);

  const Real r1 = lyapunov_fourth(forms::H2star(), Real("0.1")).ratio;
  const Real r2 = lyapunov_fourth(forms::H2star(), Real("0.05")).ratio;
  CHECK(d(r1 / r2) == doctest::Approx(2.0).epsilon(0.1));

  const std::vector<Real> rhos{Real("0.1"), Real("0.03"), Real("0.01")};
  for (const auto& f : positive_forms()) {
    INFO(f.name);
    CHECK(d(lyapunov_slope(f, rhos)) == doctest::Approx(1.0).epsilon(0.2));
  }
}

TEST_CASE("Lyapunov bound constants") {
  const std::vector<Real> rhos{Real("0.02"), Real("0.01"), Real("0.005")};
  const auto z = zeta_constants();
  const Real cand = 4 * (z.zeta2 + 3 * z.zeta3 + 2 * z.zeta4);
  const auto a1 = lyapunov_bound_constant(1, rhos);
  const auto a2 = lyapunov_bound_constant(2, rhos);
  CHECK(a1.candidate == cand);
  REQUIRE(a1.rows.size() == 3);
  for (const auto& r : a1.rows) CHECK(r.rel_dev < Real("0.005"));
  CHECK(abs(a1.fitted / cand - 1) < Real("1e-5"));
  // the a = 2 sum at rho equals the a = 1 sum at 2 rho
  CHECK(abs(a2.rows[1].sum - a1.rows[0].sum) < Real("1e-35") * a1.rows[0].sum);

  const auto odd = lyapunov_odd_constant(rhos);
  CHECK(odd.candidate == 2 * z.zeta2 + 6 * z.zeta3 + 4 * z.zeta4);
  for (const auto& r : odd.rows) CHECK(r.rel_dev < Real("0.005"));

  CHECK_THROWS_AS(lyapunov_bound_constant(0, rhos), AsymptoticsError);
  CHECK_THROWS_AS(lyapunov_bound_constant(1, {Real("0.2")}), AsymptoticsError);
  CHECK_THROWS_AS(lyapunov_odd_constant({}), AsymptoticsError);
}
