#pragma once

#include "qmod/qseries.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Builders for the named series and exact checks of the identities among
// them. Every builder takes `order` as an exponent of q and returns a series
// whose coefficients are guaranteed through q^order.
namespace qmod {

struct EtaFactor {
  long scale = 1;     // m in eta(m tau)
  long exponent = 1;  // e
};
using EtaQuotientSpec = std::vector<EtaFactor>;

/// One polynomial in the variable, raised to `power`. Coefficients ascending.
struct PolyFactor {
  std::vector<long> coeffs;
  long power = 1;
};

/// prod(numer) / prod(denom), each a PolyFactor in one series variable.
struct RationalExpr {
  std::vector<PolyFactor> numer;
  std::vector<PolyFactor> denom;
};

struct HauptmodulRecord {
  int level;
  RationalExpr j_in_terms;                 // j as a rational function of j_N
  std::optional<PolyFactor> phi;           // extra denominator factor Phi_N(j_N)
  std::optional<EtaQuotientSpec> phi_eta;  // eta quotient equal to 1/Phi_N(j_N)
};

const std::vector<int>& hauptmodul_levels();
const HauptmodulRecord& hauptmodul_record(int level);

// Builders ------------------------------------------------------------------

QSeries eta(long order);                  // grid 24, pentagonal-number sum
QSeries eta_scaled(long m, long order);   // eta(m tau) from its product, grid 24
QSeries eta_quotient(const EtaQuotientSpec& spec, long order);
QSeries e4(long order);
QSeries j_function(long order);           // E4^3 / eta^24

enum class ThetaMode { sum, product };
/// which in {0, 2, 3}; grid 8.
QSeries theta(int which, long order, ThetaMode mode = ThetaMode::sum);
/// theta_which^8 on the coarsest grid it lives on (2 for theta0/theta3, 1 for theta2).
QSeries theta_eighth(int which, long order, ThetaMode mode = ThetaMode::sum);
QSeries j_via_theta(long order);

/// H1 on grid 1, H2 and H3 on grid 2.
QSeries h_series(int i, long order);
/// 2^7 + q^-1 prod (1+q^n)^-24.
QSeries h1_closed(long order);

/// Series in t (grid 1): H2*(t) = 2^7 prod((1+t^{2n-1})/(1-t^{2n-1}))^16 and
/// H3*(t) = 2^15 t^2 prod((1+t^{2n})/(1-t^{2n-1}))^16.
QSeries h2_star(long order);
QSeries h3_star(long order);
/// Branch of H2 or H3 at t = sign*q^{1/2}; grid 2. i in {2,3}.
QSeries h_branch(int i, int sign, long order);

QSeries hauptmodul(int level, long order);
/// 16 eta(8tau)^4/eta(2tau)^4 - eta(2tau)^4/eta(8tau)^4
QSeries j4_star(long order);

/// Evaluate a RationalExpr at the series x, Laurent-inverting the denominator.
QSeries evaluate(const RationalExpr& expr, const QSeries& x);
QSeries evaluate(const PolyFactor& f, const QSeries& x);

// Verifiers -----------------------------------------------------------------

struct IdentityCheck {
  std::string name;
  bool passed = true;
  std::optional<mpq_class> first_mismatch;
  mpq_class checked_through;
  std::string detail;
};

struct VerificationReport {
  std::string suite;
  std::vector<IdentityCheck> checks;

  bool passed() const;
  const IdentityCheck* first_failure() const;
  void add(IdentityCheck c) { checks.push_back(std::move(c)); }
};

/// Exact comparison of two series, wrapped as a named check.
IdentityCheck check_equal(std::string name, const QSeries& lhs, const QSeries& rhs);

/// Both sides of X^4+Y^4+Z^4-2(X^2Y^2+Y^2Z^2+Z^2X^2) = (X+Y+Z)(X+Y-Z)(X-Y+Z)(X-Y-Z).
std::pair<mpz_class, mpz_class> quartic_identity_sides(const mpz_class& x, const mpz_class& y,
                                                       const mpz_class& z);

VerificationReport verify_theta_identities(long order, std::uint64_t seed = 0);
VerificationReport verify_h_closed_forms(long order);
VerificationReport verify_table1(int level, long order);
VerificationReport verify_phi_eta(int level, long order);
VerificationReport verify_j4_star(long order);
/// q^-1 prod(1+q^n)^-24 below q^-1 prod(1-q^n)^-24 coefficientwise from q^0.
VerificationReport verify_dominance(long order);

}  // namespace qmod
