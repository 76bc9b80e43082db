#pragma once

#include "qmod/qseries.hpp"
#include "qmod/real.hpp"

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Analytic evaluation of symbolic infinite products
//   F(t) = c * t^{k0} * prod_factors prod_{n>=0} (1 + s t^{a+mn})^e
// at t = e^{-rho}. The parameter is called rho for means and variances and
// lambda for logs; they are the same quantity.
namespace qmod {

class AsymptoticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProductFactor {
  int sign = -1;
  mpq_class offset = 1;  // a > 0
  mpq_class step = 1;    // m > 0
  long exponent = 1;
};

struct ProductForm {
  std::string name;
  mpq_class coeff = 1;
  mpq_class k0 = 0;
  std::vector<ProductFactor> factors;
  // Set when nonnegativity of the expansion is known by a theorem rather than
  // by the per-factor sign rule (e.g. g(a,b,c) with a | b).
  bool certified_nonnegative = false;

  /// Expansion coefficients known to be >= 0.
  bool nonnegative() const;
  void validate() const;
};

/// Product of two forms: factor lists concatenate.
ProductForm operator*(const ProductForm& a, const ProductForm& b);

Real pf_mean(const ProductForm& form, const Real& rho);
Real pf_variance(const ProductForm& form, const Real& rho);
Real pf_log(const ProductForm& form, const Real& lambda);

/// E[e^{i theta X}] = F(e^{i theta} t)/F(t), t = e^{-rho}, in long double.
std::complex<long double> pf_charfn(const ProductForm& form, long double rho, long double theta);

/// Exact expansion through t^order on the given grid.
QSeries pf_expand(const ProductForm& form, ExponentGrid grid, long order);

struct ZetaConstants {
  Real zeta2, zeta3, zeta4, zeta2_half;
};
ZetaConstants zeta_constants();

namespace forms {
ProductForm P(long m, long a);
ProductForm Q();
ProductForm R();
ProductForm H1star();
ProductForm H2star();
ProductForm H3star();
ProductForm j2star();
ProductForm j2inv();
ProductForm j2invsq();
/// j_N^{-1} = q * g(1, N, 24/(N-1)).
ProductForm jNinv(int level);
/// prod_{k>=1} ((1-t^{bk})/(1-t^{ak}))^c
ProductForm g(long a, long b, long c);
/// 1/Phi_N(j_N) as an eta quotient, N in {4, 9, 25}.
ProductForm phi_inv(int level);
/// Registry lookup: P(m,a) via "P", g via "g", jNinv via "jNinv"; others by name.
ProductForm by_name(const std::string& name, long p1 = 0, long p2 = 0, long p3 = 0);
std::vector<std::string> names();
}  // namespace forms

/// Leading-order model: mean ~ A/rho^2, variance ~ B/rho^3,
/// log F(e^{-lambda}) ~ alpha/lambda + beta*log(lambda) + gamma.
struct AsymptoticModel {
  Real A, B, const_m;
  Real alpha, beta, gamma;
  void validate() const;
};

enum class EmKind { mP, sP, logP, mQ, sQ, logQ, mR, sR, logR };

struct EmRow {
  Real rho, value, main, residual, scaled;
};

/// `scaled` is (value/main - 1)/rho for means and variances, (value - main)/rho for logs.
std::vector<EmRow> em_residual(EmKind kind, const std::vector<Real>& rhos, long m = 1, long a = 1);
EmKind em_kind_from_string(const std::string& s);
std::string to_string(EmKind k);

}  // namespace qmod
