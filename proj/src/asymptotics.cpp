#include "qmod/asymptotics.hpp"

#include <boost/math/special_functions/log1p.hpp>

#include <algorithm>
#include <cmath>

namespace qmod {

namespace {

constexpr long kMaxTerms = 10000000;

Real rel_tol() { return Real("1e-30"); }

// Walks k = a + m*n, x = e^{-k rho} and accumulates term(k, x) until the
// terms are negligible past the peak.
template <class Term>
Real factor_sum(const ProductFactor& f, const Real& rho, Term term) {
  const Real a = to_real(f.offset), m = to_real(f.step);
  const Real r = exp(-m * rho);
  const Real tol = rel_tol();
  const Real abs_tol = pow(Real(10), -static_cast<int>(precision()) - 10);
  Real x = exp(-a * rho);
  Real k = a;
  Real sum = 0;
  for (long n = 0; n < kMaxTerms; ++n) {
    const Real t = term(k, x);
    sum += t;
    const Real at = abs(t);
    if (k * rho > 8 && (at < tol * abs(sum) || at < abs_tol)) return sum;
    k += m;
    x *= r;
  }
  throw AsymptoticsError("inner sum did not converge within 1e7 terms");
}

void check_rho(const Real& rho) {
  if (!(rho > 0)) throw AsymptoticsError("rho must be positive");
}

}  // namespace

void ProductForm::validate() const {
  for (const auto& f : factors) {
    if (f.sign != 1 && f.sign != -1) throw AsymptoticsError(name + ": factor sign must be +-1");
    if (sgn(f.offset) <= 0 || sgn(f.step) <= 0) {
      throw AsymptoticsError(name + ": factor offset and step must be positive");
    }
  }
}

bool ProductForm::nonnegative() const {
  if (sgn(coeff) <= 0) return false;
  if (certified_nonnegative) return true;
  // (1 - t^k)^{-|e|} and (1 + t^k)^{|e|} expand with nonnegative coefficients
  return std::all_of(factors.begin(), factors.end(), [](const ProductFactor& f) {
    return f.exponent == 0 || (f.sign < 0) == (f.exponent < 0);
  });
}

ProductForm operator*(const ProductForm& a, const ProductForm& b) {
  ProductForm r;
  r.name = a.name + "*" + b.name;
  r.coeff = a.coeff * b.coeff;
  r.k0 = a.k0 + b.k0;
  r.factors = a.factors;
  r.factors.insert(r.factors.end(), b.factors.begin(), b.factors.end());
  r.certified_nonnegative = a.nonnegative() && b.nonnegative();
  return r;
}

Real pf_mean(const ProductForm& form, const Real& rho) {
  check_rho(rho);
  form.validate();
  Real total = to_real(form.k0);
  for (const auto& f : form.factors) {
    const int s = f.sign;
    total += f.exponent * factor_sum(f, rho, [s](const Real& k, const Real& x) {
               return s > 0 ? Real(k * x / (1 + x)) : Real(-k * x / (1 - x));
             });
  }
  return total;
}

Real pf_variance(const ProductForm& form, const Real& rho) {
  check_rho(rho);
  form.validate();
  Real total = 0;
  for (const auto& f : form.factors) {
    const int s = f.sign;
    total += f.exponent * factor_sum(f, rho, [s](const Real& k, const Real& x) {
               const Real d = s > 0 ? Real(1 + x) : Real(1 - x);
               return Real(s * k * k * x / (d * d));
             });
  }
  return total;
}

Real pf_log(const ProductForm& form, const Real& lambda) {
  check_rho(lambda);
  form.validate();
  if (sgn(form.coeff) <= 0) throw AsymptoticsError(form.name + ": log needs a positive prefactor");
  Real total = log(to_real(form.coeff)) - to_real(form.k0) * lambda;
  for (const auto& f : form.factors) {
    const int s = f.sign;
    total += f.exponent * factor_sum(f, lambda, [s](const Real&, const Real& x) {
               return Real(boost::math::log1p(Real(s * x)));
             });
  }
  return total;
}

std::complex<long double> pf_charfn(const ProductForm& form, long double rho, long double theta) {
  if (!(rho > 0)) throw AsymptoticsError("rho must be positive");
  form.validate();
  if (!form.nonnegative()) {
    throw AsymptoticsError(form.name + ": characteristic function needs nonnegative coefficients");
  }
  using C = std::complex<long double>;
  C total(0.0L, form.k0.get_d() * theta);
  for (const auto& f : form.factors) {
    const long double a = f.offset.get_d(), m = f.step.get_d();
    const C step = std::exp(C(-m * rho, m * theta));
    const long double xstep = std::exp(-m * rho);
    C w = std::exp(C(-a * rho, a * theta));
    long double x = std::exp(-a * rho);
    long double k = a;
    C acc = 0;
    for (long n = 0;; ++n) {
      if (n >= kMaxTerms) throw AsymptoticsError("characteristic function sum did not converge");
      const C one_w = 1.0L + static_cast<long double>(f.sign) * w;
      if (one_w.real() <= 0) {
        throw AsymptoticsError("branch cut crossed; rho too large for this theta");
      }
      acc += std::log(one_w) - std::log1p(static_cast<long double>(f.sign) * x);
      if (k * rho > 8 && x < 1e-24L) break;
      k += m;
      if ((n & 63) == 63) {
        w = std::exp(C(-k * rho, std::fmod(k * theta, 2 * 3.14159265358979323846264338327950288L)));
        x = std::exp(-k * rho);
      } else {
        w *= step;
        x *= xstep;
      }
    }
    total += static_cast<long double>(f.exponent) * acc;
  }
  return std::exp(total);
}

QSeries pf_expand(const ProductForm& form, ExponentGrid grid, long order) {
  form.validate();
  const long D = grid.denom();
  auto on_grid = [D](const mpq_class& v, const char* what) {
    mpq_class s = v * D;
    s.canonicalize();
    if (s.get_den() != 1) {
      throw AsymptoticsError(std::string(what) + " " + v.get_str() + " is off the grid 1/" +
                             std::to_string(D));
    }
    return s.get_num().get_si();
  };
  const long shift = on_grid(form.k0, "prefactor exponent");
  std::vector<BinomialFactor> fs;
  for (const auto& f : form.factors) {
    fs.push_back({f.sign, on_grid(f.offset, "factor offset"), on_grid(f.step, "factor step"), f.exponent});
  }
  QSeries p = infinite_product(grid, order * D - shift, fs);
  return p.shifted(shift) * form.coeff;
}

namespace {

// B_0..B_n exactly.
std::vector<mpq_class> bernoulli(std::size_t n) {
  std::vector<mpq_class> b(n + 1);
  b[0] = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    mpq_class s = 0;
    mpz_class c = 1;  // C(m+1, k)
    for (std::size_t k = 0; k < m; ++k) {
      s += c * b[k];
      c = c * static_cast<unsigned long>(m + 1 - k) / static_cast<unsigned long>(k + 1);
    }
    b[m] = -s / mpq_class(static_cast<unsigned long>(m + 1));
    b[m].canonicalize();
  }
  return b;
}

}  // namespace

ZetaConstants zeta_constants() {
  ZetaConstants z;
  const Real pi = real_pi();
  z.zeta2 = pi * pi / 6;
  z.zeta4 = pow(pi, 4) / 90;
  z.zeta2_half = pi * pi / 2;
  // zeta(3): direct sum to N-1 plus Euler-Maclaurin tail at N
  const long N = 100;
  const std::size_t J = precision() / 2 + 5;
  Real s = 0;
  for (long k = N - 1; k >= 1; --k) s += 1 / pow(Real(k), 3);
  const Real n = N;
  Real tail = 1 / (2 * n * n) + 1 / (2 * n * n * n);
  const auto b = bernoulli(2 * J);
  Real np = pow(n, 4);
  for (std::size_t j = 1; j <= J; ++j) {
    tail += to_real(b[2 * j]) * Real(2 * j + 1) / (2 * np);
    np *= n * n;
  }
  z.zeta3 = s + tail;
  return z;
}

namespace forms {

namespace {

ProductForm make(std::string name, std::vector<ProductFactor> f, mpq_class c = 1, mpq_class k0 = 0) {
  ProductForm p;
  p.name = std::move(name);
  p.factors = std::move(f);
  p.coeff = c;
  p.k0 = k0;
  p.validate();
  return p;
}

}  // namespace

ProductForm P(long m, long a) {
  if (a < 1 || m < 1) throw AsymptoticsError("P(m,a) needs positive m and a");
  return make("P(" + std::to_string(m) + "," + std::to_string(a) + ")", {{-1, a, m, -1}});
}
ProductForm Q() { return make("Q", {{1, 1, 2, 1}}); }
ProductForm R() { return make("R", {{1, 2, 2, 1}}); }
ProductForm H1star() { return make("H1star", {{-1, 1, 1, -24}}); }
ProductForm H2star() { return make("H2star", {{1, 1, 2, 16}, {-1, 1, 2, -16}}, 128); }
ProductForm H3star() { return make("H3star", {{1, 2, 2, 16}, {-1, 1, 2, -16}}, 32768, 2); }
ProductForm j2star() { return make("j2star", {{1, 1, 2, 24}}, 1, -1); }
ProductForm j2inv() { return make("j2inv", {{1, 1, 1, 24}}, 1, 1); }
ProductForm j2invsq() { return make("j2invsq", {{1, 1, 1, 48}}, 1, 2); }

ProductForm g(long a, long b, long c) {
  if (a < 1 || b < 1) throw AsymptoticsError("g(a,b,c) needs positive a and b");
  ProductForm p = make("g(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")",
                       {{-1, b, b, c}, {-1, a, a, -c}});
  p.certified_nonnegative = c > 0 && b % a == 0;
  return p;
}

ProductForm jNinv(int level) {
  static const std::vector<int> ok{2, 3, 4, 5, 7, 9, 13, 25};
  if (std::find(ok.begin(), ok.end(), level) == ok.end()) {
    throw AsymptoticsError("unsupported level N=" + std::to_string(level));
  }
  ProductForm p = g(1, level, 24 / (level - 1));
  p.k0 = 1;
  p.name = "j" + std::to_string(level) + "inv";
  return p;
}

ProductForm phi_inv(int level) {
  // eta quotient over the product part, prefactor q^{sum m e / 24}
  std::vector<std::pair<long, long>> spec;
  switch (level) {
    case 4: spec = {{1, 8}, {4, 16}, {2, -24}}; break;
    case 9: spec = {{1, 3}, {9, 9}, {3, -12}}; break;
    case 25: spec = {{1, 1}, {25, 5}, {5, -6}}; break;
    default: throw AsymptoticsError("Phi_N exists for N in {4, 9, 25}");
  }
  std::vector<ProductFactor> f;
  long shift = 0;
  for (auto [m, e] : spec) {
    f.push_back({-1, m, m, e});
    shift += m * e;
  }
  return make("phi" + std::to_string(level) + "inv", f, 1, mpq_class(shift, 24));
}

std::vector<std::string> names() {
  return {"P", "Q", "R", "H1star", "H2star", "H3star", "j2star", "j2inv", "j2invsq", "jNinv", "g", "phi"};
}

ProductForm by_name(const std::string& name, long p1, long p2, long p3) {
  if (name == "P") return P(p1, p2);
  if (name == "Q") return Q();
  if (name == "R") return R();
  if (name == "H1star") return H1star();
  if (name == "H2star") return H2star();
  if (name == "H3star") return H3star();
  if (name == "j2star") return j2star();
  if (name == "j2inv") return j2inv();
  if (name == "j2invsq") return j2invsq();
  if (name == "jNinv") return jNinv(static_cast<int>(p1));
  if (name == "g") return g(p1, p2, p3);
  if (name == "phi") return phi_inv(static_cast<int>(p1));
  std::string list;
  for (const auto& n : names()) list += (list.empty() ? "" : ", ") + n;
  throw AsymptoticsError("unknown form '" + name + "'; registry: " + list);
}

}  // namespace forms

void AsymptoticModel::validate() const {
  if (!(A > 0) || !(B > 0)) throw AsymptoticsError("model needs A > 0 and B > 0");
}

EmKind em_kind_from_string(const std::string& s) {
  static const std::vector<std::pair<std::string, EmKind>> table{
      {"mP", EmKind::mP}, {"sP", EmKind::sP}, {"logP", EmKind::logP}, {"mQ", EmKind::mQ},
      {"sQ", EmKind::sQ}, {"logQ", EmKind::logQ}, {"mR", EmKind::mR}, {"sR", EmKind::sR},
      {"logR", EmKind::logR}};
  for (const auto& [k, v] : table)
    if (k == s) return v;
  throw AsymptoticsError("unknown quantity '" + s + "' (mP, sP, logP, mQ, sQ, logQ, mR, sR, logR)");
}

std::string to_string(EmKind k) {
  switch (k) {
    case EmKind::mP: return "mP";
    case EmKind::sP: return "sP";
    case EmKind::logP: return "logP";
    case EmKind::mQ: return "mQ";
    case EmKind::sQ: return "sQ";
    case EmKind::logQ: return "logQ";
    case EmKind::mR: return "mR";
    case EmKind::sR: return "sR";
    case EmKind::logR: return "logR";
  }
  return "?";
}

std::vector<EmRow> em_residual(EmKind kind, const std::vector<Real>& rhos, long m, long a) {
  for (const auto& r : rhos) {
    if (!(r > 0) || r > Real("0.2")) throw AsymptoticsError("em_residual needs rho in (0, 0.2]");
  }
  const Real pi = real_pi();
  const Real pi2 = pi * pi;
  ProductForm form;
  switch (kind) {
    case EmKind::mP: case EmKind::sP: case EmKind::logP: form = forms::P(m, a); break;
    case EmKind::mQ: case EmKind::sQ: case EmKind::logQ: form = forms::Q(); break;
    default: form = forms::R(); break;
  }
  std::vector<EmRow> rows(rhos.size());
  const long n = static_cast<long>(rhos.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    const Real rho = rhos[static_cast<std::size_t>(i)];
    EmRow row;
    row.rho = rho;
    bool is_log = false;
    switch (kind) {
      case EmKind::mP:
        row.value = pf_mean(form, rho);
        row.main = pi2 / (6 * m * rho * rho);
        break;
      case EmKind::sP:
        row.value = pf_variance(form, rho);
        row.main = pi2 / (3 * m * rho * rho * rho);
        break;
      case EmKind::logP: {
        row.value = pf_log(form, rho);
        Real ratio = to_real(mpq_class(a, m));
        Real gam;
        mpfr_gamma(gam.backend().data(), ratio.backend().data(), MPFR_RNDN);
        row.main = pi2 / (6 * m * rho) + log(gam / sqrt(2 * pi)) + (ratio - Real("0.5")) * log(m * rho);
        is_log = true;
        break;
      }
      case EmKind::mQ: case EmKind::mR:
        row.value = pf_mean(form, rho);
        row.main = pi2 / (24 * rho * rho);
        break;
      case EmKind::sQ: case EmKind::sR:
        row.value = pf_variance(form, rho);
        row.main = pi2 / (12 * rho * rho * rho);
        break;
      case EmKind::logQ:
        row.value = pf_log(form, rho);
        row.main = pi2 / (24 * rho);
        is_log = true;
        break;
      case EmKind::logR:
        row.value = pf_log(form, rho);
        row.main = pi2 / (24 * rho) - log(Real(2)) / 2;
        is_log = true;
        break;
    }
    row.residual = row.value - row.main;
    row.scaled = is_log ? Real(row.residual / rho) : Real((row.value / row.main - 1) / rho);
    rows[static_cast<std::size_t>(i)] = row;
  }
  return rows;
}

}  // namespace qmod
