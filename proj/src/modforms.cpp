#include "qmod/modforms.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <map>
#include <random>
#include <stdexcept>

namespace qmod {

namespace {

const ExponentGrid G1(1), G2(2), G8(8), G24(24);

// Truncate to exactly q^order, refusing if the pipeline fell short.
QSeries finish(const QSeries& s, long order) {
  const long idx = order * s.denom();
  if (s.order() < idx) {
    throw std::logic_error("internal: series guaranteed only through q^" +
                           exponent_to_string(s.order_exponent()) + ", needed q^" +
                           std::to_string(order));
  }
  return s.truncated(idx);
}

PolyFactor xpow(long k) { return {{0, 1}, k}; }

std::vector<HauptmodulRecord> build_records() {
  std::vector<HauptmodulRecord> r;
  r.push_back({2, {{{{256, 1}, 3}}, {xpow(2)}}, {}, {}});
  r.push_back({3, {{{{27, 1}, 1}, {{243, 1}, 3}}, {xpow(3)}}, {}, {}});
  r.push_back({4,
               {{{{4096, 256, 1}, 3}}, {xpow(4), {{16, 1}, 1}}},
               PolyFactor{{16, 1}, 1},
               EtaQuotientSpec{{1, 8}, {4, 16}, {2, -24}}});
  r.push_back({5, {{{{3125, 250, 1}, 3}}, {xpow(5)}}, {}, {}});
  r.push_back({7, {{{{49, 13, 1}, 1}, {{2401, 245, 1}, 3}}, {xpow(7)}}, {}, {}});
  r.push_back({9,
               {{{{9, 1}, 3}, {{6561, 2187, 243, 1}, 3}}, {xpow(9), {{27, 9, 1}, 1}}},
               PolyFactor{{27, 9, 1}, 1},
               EtaQuotientSpec{{1, 3}, {9, 9}, {3, -12}}});
  r.push_back({13, {{{{13, 5, 1}, 1}, {{28561, 15379, 3380, 247, 1}, 3}}, {xpow(13)}}, {}, {}});
  r.push_back({25,
               {{{{1953125, 3906250, 4296875, 3125000, 1640625, 631250, 178125, 35000, 4375, 250, 1},
                  3}},
                {xpow(25), {{25, 25, 15, 5, 1}, 1}}},
               PolyFactor{{25, 25, 15, 5, 1}, 1},
               EtaQuotientSpec{{1, 1}, {25, 5}, {5, -6}}});
  return r;
}

const std::vector<HauptmodulRecord>& records() {
  static const std::vector<HauptmodulRecord> r = build_records();
  return r;
}

}  // namespace

const std::vector<int>& hauptmodul_levels() {
  static const std::vector<int> levels = [] {
    std::vector<int> v;
    for (const auto& r : records()) v.push_back(r.level);
    return v;
  }();
  return levels;
}

const HauptmodulRecord& hauptmodul_record(int level) {
  for (const auto& r : records())
    if (r.level == level) return r;
  throw std::invalid_argument("unsupported level N=" + std::to_string(level) +
                              " (supported: 2, 3, 4, 5, 7, 9, 13, 25)");
}

QSeries eta(long order) {
  // sum over k of (-1)^k q^{(6k-1)^2/24}
  const long top = 24 * order;
  std::vector<mpz_class> c(static_cast<std::size_t>(std::max(0L, top) + 1));
  for (long k = 0;; ++k) {
    bool any = false;
    for (long kk : {k, -k - 1}) {
      const long idx = (6 * kk - 1) * (6 * kk - 1);
      if (idx > top) continue;
      any = true;
      c[static_cast<std::size_t>(idx)] += (kk % 2 == 0) ? 1 : -1;
    }
    if (!any) break;
  }
  return QSeries::from_integers(G24, 0, std::move(c), top);
}

QSeries eta_scaled(long m, long order) {
  if (m < 1) throw std::invalid_argument("eta_scaled: scale must be positive");
  const std::vector<BinomialFactor> f{{-1, 24 * m, 24 * m, 1}};
  return finish(infinite_product(G24, 24 * order - m, f).shifted(m), order);
}

QSeries eta_quotient(const EtaQuotientSpec& spec, long order) {
  long shift = 0;  // in units of q^{1/24}
  std::vector<BinomialFactor> f;
  for (const auto& e : spec) {
    if (e.scale < 1) throw std::invalid_argument("eta_quotient: scale must be positive");
    shift += e.scale * e.exponent;
    f.push_back({-1, e.scale, e.scale, e.exponent});
  }
  // product part lives on integer exponents; the prefactor q^{shift/24} fixes the grid
  const long g = std::gcd(24L, shift);
  const long floor_shift = shift >= 0 ? shift / 24 : -((-shift + 23) / 24);
  QSeries p = infinite_product(G1, std::max(order - floor_shift, -1L), f);
  QSeries s = p.rescaled(24 / g).shifted(shift / g);
  return finish(s, order);
}

QSeries e4(long order) {
  std::vector<mpz_class> c(static_cast<std::size_t>(order + 1));
  for (long d = 1; d <= order; ++d) {
    const mpz_class d3 = mpz_class(d) * d * d;
    for (long n = d; n <= order; n += d) c[static_cast<std::size_t>(n)] += d3;
  }
  for (auto& x : c) x *= 240;
  c[0] = 1;
  return QSeries::from_integers(G1, 0, std::move(c), order);
}

QSeries j_function(long order) {
  const QSeries e = e4(order + 1);
  const QSeries d = eta_quotient({{1, 24}}, order + 2);
  return finish(mul(pow(e, 3), invert(d)), order);
}

QSeries theta(int which, long order, ThetaMode mode) {
  const long top = 8 * order;
  if (mode == ThetaMode::sum) {
    std::vector<mpz_class> c(static_cast<std::size_t>(std::max(0L, top) + 1));
    if (which == 0 || which == 3) {
      for (long n = 0; 4 * n * n <= top; ++n) {
        const long v = (n == 0 ? 1 : 2) * ((which == 0 && n % 2) ? -1 : 1);
        c[static_cast<std::size_t>(4 * n * n)] += v;
      }
    } else if (which == 2) {
      for (long n = 0; (2 * n + 1) * (2 * n + 1) <= top; ++n) c[static_cast<std::size_t>((2 * n + 1) * (2 * n + 1))] += 2;
    } else {
      throw std::invalid_argument("theta index must be 0, 2 or 3");
    }
    return QSeries::from_integers(G8, 0, std::move(c), top);
  }
  std::vector<BinomialFactor> f{{-1, 8, 8, 1}};
  switch (which) {
    case 0: f.push_back({-1, 4, 8, 2}); break;
    case 3: f.push_back({1, 4, 8, 2}); break;
    case 2: {
      f.push_back({1, 8, 8, 2});
      return finish(infinite_product(G8, top - 1, f).shifted(1) * mpq_class(2), order);
    }
    default: throw std::invalid_argument("theta index must be 0, 2 or 3");
  }
  return infinite_product(G8, top, f);
}

QSeries theta_eighth(int which, long order, ThetaMode mode) {
  if (which == 2) {
    // theta2 = q^{1/8} * (series in integral powers)
    QSeries core = theta(2, order, mode).shifted(-1).projected(1);
    return finish(pow(core, 8).shifted(1), order);
  }
  return finish(pow(theta(which, order, mode).projected(2), 8), order);
}

namespace {

struct Eighths {
  QSeries t0, t2, t3, i0, i2, i3;
};

Eighths eighths(long order) {
  Eighths e;
  e.t0 = theta_eighth(0, order + 2);
  e.t2 = theta_eighth(2, order + 2);
  e.t3 = theta_eighth(3, order + 2);
  e.i0 = invert(e.t0);
  e.i2 = invert(e.t2);
  e.i3 = invert(e.t3);
  return e;
}

}  // namespace

QSeries j_via_theta(long order) {
  const Eighths e = eighths(order);
  QSeries s = e.t0 + e.t2 + e.t3;
  QSeries t = e.i0 + e.i2 + e.i3;
  return finish((s * t * mpq_class(128)).projected(1), order);
}

QSeries h_series(int i, long order) {
  const Eighths e = eighths(order);
  const mpq_class c(128);
  switch (i) {
    case 1: return finish(((e.t0 + e.t3) * e.i2 * c).projected(1), order);
    case 2: return finish((e.t0 * e.i3 + e.t3 * e.i0) * c, order);
    case 3: return finish(e.t2 * (e.i3 + e.i0) * c, order);
    default: throw std::invalid_argument("H index must be 1, 2 or 3");
  }
}

QSeries h1_closed(long order) {
  const std::vector<BinomialFactor> f{{1, 1, 1, -24}};
  return infinite_product(G1, order + 1, f).shifted(-1) + QSeries::constant(128, G1, order);
}

QSeries h2_star(long order) {
  const std::vector<BinomialFactor> f{{1, 1, 2, 16}, {-1, 1, 2, -16}};
  return infinite_product(G1, order, f) * mpq_class(128);
}

QSeries h3_star(long order) {
  const std::vector<BinomialFactor> f{{1, 2, 2, 16}, {-1, 1, 2, -16}};
  return finish((infinite_product(G1, order - 2, f) * mpq_class(32768)).shifted(2), order);
}

QSeries h_branch(int i, int sign, long order) {
  QSeries star;
  if (i == 2) star = h2_star(2 * order);
  else if (i == 3) star = h3_star(2 * order);
  else throw std::invalid_argument("branches exist for H2 and H3 only");
  return substitute(star, 1, 2, sign);
}

QSeries hauptmodul(int level, long order) {
  hauptmodul_record(level);
  const long e = 24 / (level - 1);
  return eta_quotient({{1, e}, {level, -e}}, order);
}

QSeries j4_star(long order) {
  const QSeries a = eta_quotient({{8, 4}, {2, -4}}, order);
  const QSeries b = eta_quotient({{2, 4}, {8, -4}}, order);
  return finish(a * mpq_class(16) - b, order);
}

QSeries evaluate(const PolyFactor& f, const QSeries& x) {
  if (f.coeffs.empty()) throw std::invalid_argument("empty polynomial");
  const long deg = static_cast<long>(f.coeffs.size()) - 1;
  const long const_order = x.order() + std::max(0L, -x.vmin()) * (deg + 1);
  QSeries acc = QSeries::constant(f.coeffs.back(), x.grid(), const_order);
  for (long k = deg - 1; k >= 0; --k) {
    acc = mul(acc, x) + QSeries::constant(f.coeffs[static_cast<std::size_t>(k)], x.grid(), const_order);
  }
  return pow(acc, f.power);
}

QSeries evaluate(const RationalExpr& expr, const QSeries& x) {
  auto product = [&](const std::vector<PolyFactor>& fs) {
    std::optional<QSeries> r;
    for (const auto& f : fs) {
      QSeries v = evaluate(f, x);
      r = r ? mul(*r, v) : v;
    }
    return r ? *r : QSeries::constant(1, x.grid(), x.order() - x.vmin());
  };
  QSeries num = product(expr.numer);
  if (expr.denom.empty()) return num;
  return mul(num, invert(product(expr.denom)));
}

// Verifiers -----------------------------------------------------------------

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
}

const IdentityCheck* VerificationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

IdentityCheck check_equal(std::string name, const QSeries& lhs, const QSeries& rhs) {
  IdentityCheck c;
  c.name = std::move(name);
  const Agreement a = compare(lhs, rhs);
  c.passed = a.equal;
  c.first_mismatch = a.first_mismatch;
  c.checked_through = a.checked_through;
  if (!a.equal) c.detail = "first mismatch at q^" + exponent_to_string(*a.first_mismatch);
  return c;
}

namespace {

IdentityCheck check_through(std::string name, const QSeries& lhs, const QSeries& rhs, long order) {
  IdentityCheck c = check_equal(std::move(name), lhs, rhs);
  if (c.passed && c.checked_through < order) {
    c.passed = false;
    c.detail = "only checked through q^" + exponent_to_string(c.checked_through);
  }
  return c;
}

}  // namespace

std::pair<mpz_class, mpz_class> quartic_identity_sides(const mpz_class& x, const mpz_class& y,
                                                       const mpz_class& z) {
  const mpz_class x2 = x * x, y2 = y * y, z2 = z * z;
  mpz_class lhs = x2 * x2 + y2 * y2 + z2 * z2 - 2 * (x2 * y2 + y2 * z2 + z2 * x2);
  mpz_class rhs = (x + y + z) * (x + y - z) * (x - y + z) * (x - y - z);
  return {lhs, rhs};
}

VerificationReport verify_theta_identities(long order, std::uint64_t seed) {
  VerificationReport r{"theta", {}};
  for (int w : {0, 2, 3}) {
    r.add(check_through("theta" + std::to_string(w) + " sum = product", theta(w, order, ThetaMode::sum),
                        theta(w, order, ThetaMode::product), order));
  }
  const QSeries t0 = theta(0, order), t2 = theta(2, order), t3 = theta(3, order);
  r.add(check_through("eta^3 = theta0*theta2*theta3/2", pow(eta(order), 3),
                      t0 * t2 * t3 * mpq_class(1, 2), order));
  r.add(check_through("theta3^4 = theta0^4 + theta2^4", pow(t3, 4), pow(t0, 4) + pow(t2, 4), order));
  r.add(check_through("j = 2^7 (sum theta^8)(sum theta^-8)", j_via_theta(order), j_function(order),
                      order));

  IdentityCheck poly{"quartic factorization on random integer triples", true, {}, 0, ""};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-1000000, 1000000);
  std::vector<std::array<long, 3>> triples{{1, 0, 0}, {1, 1, 1}};
  for (int i = 0; i < 100; ++i) triples.push_back({dist(rng), dist(rng), dist(rng)});
  for (const auto& t : triples) {
    auto [lhs, rhs] = quartic_identity_sides(t[0], t[1], t[2]);
    if (lhs != rhs) {
      poly.passed = false;
      poly.detail = "fails at (" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
                    std::to_string(t[2]) + ")";
      break;
    }
  }
  r.add(poly);
  return r;
}

VerificationReport verify_h_closed_forms(long order) {
  VerificationReport r{"hforms", {}};
  const QSeries h1 = h_series(1, order), h2 = h_series(2, order), h3 = h_series(3, order);
  r.add(check_through("H1 = 2^7 + q^-1 prod(1+q^n)^-24", h1, h1_closed(order), order));
  for (int i : {2, 3}) {
    const QSeries sum = h_branch(i, 1, order) + h_branch(i, -1, order);
    r.add(check_through("H" + std::to_string(i) + " = branch(+q^1/2) + branch(-q^1/2)",
                        i == 2 ? h2 : h3, sum, order));
    IdentityCheck c{"H" + std::to_string(i) + " branch sum has no half-integer powers", true, {}, sum.order_exponent(), ""};
    try {
      (void)sum.projected(1);
    } catch (const SeriesError& e) {
      c.passed = false;
      c.detail = e.what();
    }
    r.add(c);
  }
  r.add(check_through("384 + H1 + H2 + H3 = j", QSeries::constant(384, G1, order) + h1 + h2 + h3,
                      j_function(order), order));
  return r;
}

VerificationReport verify_table1(int level, long order) {
  const HauptmodulRecord& rec = hauptmodul_record(level);
  VerificationReport r{"table1", {}};
  const QSeries x = hauptmodul(level, order);
  const QSeries j = j_function(order);
  r.add(check_through("N=" + std::to_string(level) + " j as rational function of j_N",
                      evaluate(rec.j_in_terms, x), j, order));
  if (level == 2) {
    const QSeries xi = invert(x);
    const QSeries lhs = x + QSeries::constant(768, G1, order) + xi * mpq_class(196608) +
                        pow(xi, 2) * mpq_class(16777216);
    r.add(check_through("N=2 j = j2 + 3*2^8 + 3*2^16/j2 + 2^24/j2^2", lhs, j, order));
  }
  return r;
}

VerificationReport verify_phi_eta(int level, long order) {
  const HauptmodulRecord& rec = hauptmodul_record(level);
  if (!rec.phi) throw std::invalid_argument("no Phi_N eta quotient for N=" + std::to_string(level));
  VerificationReport r{"phi", {}};
  const QSeries x = hauptmodul(level, order);
  r.add(check_through("N=" + std::to_string(level) + " 1/Phi_N(j_N) = eta quotient",
                      invert(evaluate(*rec.phi, x)), eta_quotient(*rec.phi_eta, order), order));
  return r;
}

VerificationReport verify_j4_star(long order) {
  VerificationReport r{"j4star", {}};
  const QSeries s = j4_star(order);
  const QSeries j4 = hauptmodul(4, order);
  IdentityCheck odd{"coefficient of q^(2n-1) in j4* = |d_n| from j4", true, {}, order, ""};
  IdentityCheck even{"j4 vanishes at even exponents >= 2", true, {}, order, ""};
  for (long e = 1; e <= order; ++e) {
    if (e % 2 == 1) {
      if (odd.passed && s.at(e) != abs(j4.at(e))) {
        odd.passed = false;
        odd.first_mismatch = e;
        odd.detail = "mismatch at q^" + std::to_string(e);
      }
    } else if (even.passed && sgn(j4.at(e)) != 0) {
      even.passed = false;
      even.first_mismatch = e;
      even.detail = "nonzero at q^" + std::to_string(e);
    }
  }
  r.add(odd);
  r.add(even);
  IdentityCheck head{"j4 = q^-1 - 8 + ...", j4.at(-1) == 1 && j4.at(0) == -8, {}, 0, ""};
  r.add(head);
  return r;
}

VerificationReport verify_dominance(long order) {
  VerificationReport r{"dominance", {}};
  const std::vector<BinomialFactor> plus{{1, 1, 1, -24}}, minus{{-1, 1, 1, -24}};
  const QSeries a = infinite_product(G1, order + 1, plus).shifted(-1);
  const QSeries b = infinite_product(G1, order + 1, minus).shifted(-1);
  const Dominance d = dominates(a, b, 0);
  IdentityCheck c{"q^-1 prod(1+q^n)^-24 <= q^-1 prod(1-q^n)^-24 from q^0", d.holds,
                  d.first_violation, order, ""};
  if (!d.holds) c.detail = "violated at q^" + exponent_to_string(*d.first_violation);
  r.add(c);
  return r;
}

}  // namespace qmod
