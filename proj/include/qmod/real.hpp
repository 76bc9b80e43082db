#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <string>

namespace qmod {

using Real = boost::multiprecision::mpfr_float;

constexpr unsigned kDefaultDigits = 50;
constexpr unsigned kMinDigits = 40;

/// Sets the working precision for every Real created afterwards. Throws
/// std::invalid_argument below kMinDigits.
void set_precision(unsigned digits);
unsigned precision();

/// Applies QMOD_PRECISION if set, else kDefaultDigits. Call once at startup,
/// before any parallel region.
void init_precision_from_env();

Real real_pi();
Real to_real(const mpq_class& q);
Real to_real(const mpz_class& z);

/// Decimal scientific string with `digits` significant digits, rounded to
/// nearest with ties to even.
std::string to_sig_string(const Real& x, int digits = 20);

}  // namespace qmod
