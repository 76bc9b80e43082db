#include "qmod/real.hpp"

#include <cstdlib>
#include <stdexcept>

namespace qmod {

namespace {
// Boost's own default is 20 digits; never let a Real be created below the floor.
[[maybe_unused]] const bool precision_initialized = (Real::default_precision(kDefaultDigits), true);
}  // namespace

void set_precision(unsigned digits) {
  if (digits < kMinDigits) {
    throw std::invalid_argument("precision must be at least " + std::to_string(kMinDigits) + " digits");
  }
  Real::default_precision(digits);
}

unsigned precision() { return Real::default_precision(); }

void init_precision_from_env() {
  const char* env = std::getenv("QMOD_PRECISION");
  if (env == nullptr || *env == '\0') {
    set_precision(kDefaultDigits);
    return;
  }
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0') throw std::invalid_argument("QMOD_PRECISION must be an integer");
  set_precision(static_cast<unsigned>(v));
}

Real real_pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real to_real(const mpz_class& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

Real to_real(const mpq_class& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

std::string to_sig_string(const Real& x, int digits) {
  mpfr_srcptr v = x.backend().data();
  if (mpfr_nan_p(v)) return "nan";
  if (mpfr_inf_p(v)) return mpfr_sgn(v) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(v)) return "0";
  mpfr_exp_t e = 0;
  char* s = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(digits), v, MPFR_RNDN);
  std::string m(s);
  mpfr_free_str(s);
  std::string sign;
  if (m[0] == '-') {
    sign = "-";
    m.erase(0, 1);
  }
  const long exp10 = static_cast<long>(e) - 1;
  std::string out = sign + m.substr(0, 1) + "." + m.substr(1) + "e";
  out += exp10 < 0 ? "-" : "+";
  const long a = exp10 < 0 ? -exp10 : exp10;
  if (a < 10) out += "0";
  out += std::to_string(a);
  return out;
}

}  // namespace qmod
