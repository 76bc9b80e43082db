#include "oracles.hpp"
#include <algorithm>
#include <stdexcept>

namespace oracle {

std::vector<mpq_class> poly_mul(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b,
                                std::size_t len) {
  std::vector<mpq_class> out(len);
  for (std::size_t i = 0; i < a.size() && i < len; ++i)
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<mpz_class> brute_product(const std::vector<long>& ks, int sign, long e, std::size_t len) {
  std::vector<mpq_class> acc(len);
  acc[0] = 1;
  for (long k : ks) {
    // (1 + s x^k)^{|e|} or its series inverse, built by the binomial series
    std::vector<mpq_class> f(len);
    const long m = e < 0 ? -e : e;
    for (std::size_t j = 0; static_cast<std::size_t>(k) * j < len; ++j) {
      // generalized binomial C(e, j)
      mpq_class c = 1;
      for (std::size_t t = 0; t < j; ++t) {
        mpq_class r(e - static_cast<long>(t), static_cast<long>(t + 1));
        r.canonicalize();
        c *= r;
      }
      if (sign < 0 && j % 2 == 1) c = -c;
      f[static_cast<std::size_t>(k) * j] = c;
      if (e > 0 && static_cast<long>(j) >= m) break;
    }
    acc = poly_mul(acc, f, len);
  }
  std::vector<mpz_class> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = acc[i].get_num();
  return out;
}

mpz_class divisor_sigma(unsigned k, long n) {
  mpz_class s = 0, p;
  for (long d = 1; d <= n; ++d) {
    if (n % d) continue;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), k);
    s += p;
  }
  return s;
}

std::vector<mpz_class> random_ints(std::mt19937_64& rng, std::size_t len, long bound) {
  std::uniform_int_distribution<long> dist(-bound, bound);
  std::vector<mpz_class> v(len);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace oracle

#include <cmath>

namespace oracle {

namespace {

bool in_progression(long k, long a, long m) { return k >= a && (k - a) % m == 0; }

long double b_coeff(const std::vector<IntFactor>& fs, long d) {
  long double b = 0;
  for (const auto& f : fs) {
    if (f.sign < 0) {
      if (in_progression(d, f.offset, f.step)) b -= f.exponent;
    } else {
      // (1 + x) = (1 - x^2)/(1 - x)
      if (in_progression(d, f.offset, f.step)) b += f.exponent;
      if (d % 2 == 0 && in_progression(d / 2, f.offset, f.step)) b -= f.exponent;
    }
  }
  return b;
}

}  // namespace

Weights euler_weights(const std::vector<IntFactor>& factors, long shift, long double rho,
                      long double tail_tol) {
  const long double t = std::exp(-rho);
  std::vector<long double> b{0}, c{0}, tp{1};  // tp[j] = t^j
  std::vector<long double> f{1};               // f_n t^n, unnormalized
  long double peak = 1;
  std::size_t peak_at = 0;
  for (std::size_t n = 1;; ++n) {
    b.push_back(b_coeff(factors, static_cast<long>(n)));
    long double cn = 0;
    for (std::size_t d = 1; d * d <= n; ++d) {
      if (n % d) continue;
      cn += static_cast<long double>(d) * b[d];
      const std::size_t e = n / d;
      if (e != d) cn += static_cast<long double>(e) * b[e];
    }
    c.push_back(cn);
    tp.push_back(tp.back() * t);
    long double s = 0;
    for (std::size_t j = 1; j <= n; ++j) s += c[j] * tp[j] * f[n - j];
    f.push_back(s / static_cast<long double>(n));
    if (f.back() > peak) {
      peak = f.back();
      peak_at = n;
    }
    // sparse products have runs of zero weights, so test a trailing window
    if (n > peak_at + peak_at / 2 + 50 && n % 64 == 0) {
      long double tail = 0;
      for (std::size_t j = n - 63; j <= n; ++j) tail = std::max(tail, std::fabs(f[j]));
      if (tail < tail_tol * peak) break;
    }
    if (n > 400000) throw std::runtime_error("euler_weights: no convergence");
  }
  long double total = 0;
  for (auto x : f) total += x;
  for (auto& x : f) x /= total;
  return {f, shift};
}

long double weights_mean(const Weights& w) {
  long double m = 0;
  for (std::size_t n = 0; n < w.w.size(); ++n) m += static_cast<long double>(n) * w.w[n];
  return m + static_cast<long double>(w.shift);
}

std::complex<long double> weights_charfn(const Weights& w, long double theta) {
  std::complex<long double> s = 0;
  for (std::size_t n = 0; n < w.w.size(); ++n) {
    const long double ph = theta * static_cast<long double>(static_cast<long>(n) + w.shift);
    s += w.w[n] * std::complex<long double>(std::cos(ph), std::sin(ph));
  }
  return s;
}

}  // namespace oracle
