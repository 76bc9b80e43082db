#pragma once

#include <gmpxx.h>

#include <json.hpp>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmod {

/// Raised for every QSeries contract violation: off-grid exponents, reads
/// past the guaranteed order, non-invertible series, failed projections.
class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exponents are stored as integers k meaning q^{k/denom}.
class ExponentGrid {
 public:
  constexpr ExponentGrid() = default;
  explicit ExponentGrid(long denom);

  long denom() const { return denom_; }
  bool operator==(const ExponentGrid&) const = default;

  static ExponentGrid lcm(ExponentGrid a, ExponentGrid b);

 private:
  long denom_ = 1;
};

/// Truncated Laurent series in q^{1/D} with exact rational coefficients.
///
/// Coefficients are kept as integer numerators over one shared positive
/// denominator, reduced so gcd(denominator, all numerators) = 1. Every
/// coefficient at a grid index <= order() is exact; asking for anything past
/// it throws rather than returning zero. For the zero series vmin = order+1.
class QSeries {
 public:
  /// Zero series on the unit grid with order -1.
  QSeries();

  /// Integer coefficients starting at grid index `start`. Entries past `order`
  /// are dropped; missing entries up to `order` are zero.
  static QSeries from_integers(ExponentGrid grid, long start, std::vector<mpz_class> coeffs,
                               long order);
  static QSeries from_rationals(ExponentGrid grid, long start,
                                const std::vector<mpq_class>& coeffs, long order);
  static QSeries zero(ExponentGrid grid, long order);
  static QSeries constant(const mpq_class& c, ExponentGrid grid, long order);
  static QSeries monomial(const mpq_class& c, long index, ExponentGrid grid, long order);

  ExponentGrid grid() const { return grid_; }
  long denom() const { return grid_.denom(); }
  long vmin() const { return vmin_; }
  long order() const { return order_; }
  bool is_zero() const { return num_.empty(); }

  /// Coefficient at a grid index. Below vmin this is 0.
  mpq_class at(long index) const;
  /// Coefficient of q^{exponent}; the exponent must lie on the grid.
  mpq_class coeff(const mpq_class& exponent) const;
  /// Guaranteed order as an exponent of q.
  mpq_class order_exponent() const;

  std::span<const mpz_class> numerators() const { return num_; }
  const mpz_class& denominator() const { return den_; }
  bool is_integral() const { return den_ == 1; }

  QSeries truncated(long order) const;
  /// Multiplication by q^{delta/D}.
  QSeries shifted(long delta) const;
  /// Same series on a finer grid; new_denom must be a multiple of denom().
  QSeries rescaled(long new_denom) const;
  /// Same series on a coarser grid; every nonzero coefficient must land on it.
  QSeries projected(long new_denom) const;
  /// Projection onto the coarsest grid that holds every nonzero coefficient.
  QSeries compacted() const;

  QSeries operator-() const;
  QSeries& operator+=(const QSeries& other);
  QSeries& operator-=(const QSeries& other);
  QSeries& operator*=(const QSeries& other);
  QSeries& operator*=(const mpq_class& c);

  /// Structural equality (grid, vmin, order, coefficients).
  bool operator==(const QSeries& other) const = default;

 private:
  QSeries(ExponentGrid grid, long vmin, long order, std::vector<mpz_class> num, mpz_class den);
  void normalize();
  static QSeries product(const QSeries& a, const QSeries& b, bool serial);

  ExponentGrid grid_;
  long vmin_ = 0;
  long order_ = -1;
  std::vector<mpz_class> num_;  // indices vmin_..order_
  mpz_class den_ = 1;

  friend QSeries mul(const QSeries&, const QSeries&);
  friend QSeries mul_serial(const QSeries&, const QSeries&);
  friend QSeries invert(const QSeries&);
  friend QSeries substitute(const QSeries&, long, long, int);
  friend QSeries mul_binomial(const QSeries&, long, int, long);
};

QSeries add(const QSeries& a, const QSeries& b);
QSeries sub(const QSeries& a, const QSeries& b);
/// Cauchy product through the parallel kernel.
QSeries mul(const QSeries& a, const QSeries& b);
/// Cauchy product through the serial reference kernel.
QSeries mul_serial(const QSeries& a, const QSeries& b);
QSeries invert(const QSeries& a);
QSeries pow(const QSeries& a, long e);

/// q^{1/D} -> sign * q^{num/(D*den)}. The coefficient at grid index k picks up
/// sign^k and the result lives on the grid D*den.
QSeries substitute(const QSeries& a, long num, long den, int sign);

/// a * (1 + sign*q^{step/D})^exponent, exact; order is unchanged.
QSeries mul_binomial(const QSeries& a, long step, int sign, long exponent);

inline QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
inline QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
inline QSeries operator*(const QSeries& a, const QSeries& b) { return mul(a, b); }
inline QSeries operator*(QSeries a, const mpq_class& c) { return a *= c; }
inline QSeries operator*(const mpq_class& c, QSeries a) { return a *= c; }

/// One factor of prod_{n>=0} (1 + sign*q^{(offset + step*n)/D})^exponent,
/// offsets and steps in grid units.
struct BinomialFactor {
  int sign = -1;
  long offset = 1;
  long step = 1;
  long exponent = 1;
};

/// Exact expansion of prod_f prod_{n>=0} (1 + s_f q^{(a_f+m_f n)/D})^{e_f}
/// through grid index `order`.
QSeries infinite_product(ExponentGrid grid, long order, std::span<const BinomialFactor> factors);

struct Agreement {
  bool equal = true;
  std::optional<mpq_class> first_mismatch;  // exponent of q
  mpq_class checked_through;                // last exponent compared
};

/// Coefficientwise comparison on the common grid over the common guaranteed
/// range, starting at the lower of the two vmins.
Agreement compare(const QSeries& a, const QSeries& b);

struct Dominance {
  bool holds = true;
  std::optional<mpq_class> first_violation;
};

/// a_n <= b_n for every grid exponent n >= from up to the common guaranteed order.
Dominance dominates(const QSeries& a, const QSeries& b, const mpq_class& from);

nlohmann::json to_json(const QSeries& a);
QSeries series_from_json(const nlohmann::json& j);

/// Human-readable expansion, e.g. "q^-1 + 744 + 196884*q + O(q^3)".
std::string to_string(const QSeries& a, std::size_t max_terms = 12);
std::string exponent_to_string(const mpq_class& e);

}  // namespace qmod
