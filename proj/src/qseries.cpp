#include "qmod/qseries.hpp"

#include "qmod/kernels.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace qmod {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::string index_exponent(long k, long d) { return exponent_to_string(mpq_class(k, d)); }

}  // namespace

ExponentGrid::ExponentGrid(long denom) : denom_(denom) {
  if (denom < 1) throw SeriesError("grid denominator must be positive");
}

ExponentGrid ExponentGrid::lcm(ExponentGrid a, ExponentGrid b) {
  return ExponentGrid(std::lcm(a.denom_, b.denom_));
}

QSeries::QSeries() : vmin_(0), order_(-1) {}

QSeries::QSeries(ExponentGrid grid, long vmin, long order, std::vector<mpz_class> num,
                 mpz_class den)
    : grid_(grid), vmin_(vmin), order_(order), num_(std::move(num)), den_(std::move(den)) {
  if (sgn(den_) == 0) throw SeriesError("zero denominator");
  normalize();
}

void QSeries::normalize() {
  if (vmin_ > order_) num_.clear();
  num_.resize(static_cast<std::size_t>(std::max(0L, order_ - vmin_ + 1)));
  std::size_t lead = 0;
  while (lead < num_.size() && sgn(num_[lead]) == 0) ++lead;
  if (lead == num_.size()) {
    num_.clear();
    vmin_ = order_ + 1;
    den_ = 1;
    return;
  }
  if (lead > 0) {
    num_.erase(num_.begin(), num_.begin() + static_cast<long>(lead));
    vmin_ += static_cast<long>(lead);
  }
  if (sgn(den_) < 0) {
    den_ = -den_;
    for (auto& c : num_) c = -c;
  }
  if (den_ != 1) {
    mpz_class g = den_;
    for (const auto& c : num_) {
      if (sgn(c) == 0) continue;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) break;
    }
    if (g != 1) {
      for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
  }
}

QSeries QSeries::from_integers(ExponentGrid grid, long start, std::vector<mpz_class> coeffs,
                               long order) {
  if (start > order) return zero(grid, order);
  coeffs.resize(static_cast<std::size_t>(order - start + 1));
  return QSeries(grid, start, order, std::move(coeffs), 1);
}

QSeries QSeries::from_rationals(ExponentGrid grid, long start,
                                const std::vector<mpq_class>& coeffs, long order) {
  if (start > order) return zero(grid, order);
  mpz_class den = 1;
  for (const auto& c : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> num(static_cast<std::size_t>(order - start + 1));
  for (std::size_t i = 0; i < coeffs.size() && i < num.size(); ++i) {
    num[i] = coeffs[i].get_num() * (den / coeffs[i].get_den());
  }
  return QSeries(grid, start, order, std::move(num), den);
}

QSeries QSeries::zero(ExponentGrid grid, long order) {
  return QSeries(grid, order + 1, order, {}, 1);
}

QSeries QSeries::constant(const mpq_class& c, ExponentGrid grid, long order) {
  return monomial(c, 0, grid, order);
}

QSeries QSeries::monomial(const mpq_class& c, long index, ExponentGrid grid, long order) {
  return from_rationals(grid, index, {c}, order);
}

mpq_class QSeries::at(long index) const {
  if (index > order_) {
    throw SeriesError("order exceeded: index " + std::to_string(index) + " > order " +
                      std::to_string(order_) + " on grid 1/" + std::to_string(denom()));
  }
  if (index < vmin_) return 0;
  mpq_class r(num_[static_cast<std::size_t>(index - vmin_)], den_);
  r.canonicalize();
  return r;
}

mpq_class QSeries::coeff(const mpq_class& exponent) const {
  mpq_class scaled = exponent * denom();
  scaled.canonicalize();
  if (scaled.get_den() != 1) {
    throw SeriesError("exponent " + exponent_to_string(exponent) + " is off-grid for denominator " +
                      std::to_string(denom()));
  }
  if (!scaled.get_num().fits_slong_p()) throw SeriesError("order exceeded");
  return at(scaled.get_num().get_si());
}

mpq_class QSeries::order_exponent() const {
  mpq_class r(order_, denom());
  r.canonicalize();
  return r;
}

QSeries QSeries::truncated(long order) const {
  if (order >= order_) return *this;
  if (order < vmin_) return zero(grid_, order);
  std::vector<mpz_class> num(num_.begin(), num_.begin() + (order - vmin_ + 1));
  return QSeries(grid_, vmin_, order, std::move(num), den_);
}

QSeries QSeries::shifted(long delta) const {
  QSeries r = *this;
  r.vmin_ += delta;
  r.order_ += delta;
  return r;
}

QSeries QSeries::rescaled(long new_denom) const {
  if (new_denom == denom()) return *this;
  if (new_denom <= 0 || new_denom % denom() != 0) {
    throw SeriesError("cannot rescale grid 1/" + std::to_string(denom()) + " to 1/" +
                      std::to_string(new_denom));
  }
  const long r = new_denom / denom();
  ExponentGrid g(new_denom);
  if (is_zero()) return zero(g, order_ * r);
  std::vector<mpz_class> num(static_cast<std::size_t>((order_ - vmin_) * r + 1));
  for (std::size_t i = 0; i < num_.size(); ++i) num[i * static_cast<std::size_t>(r)] = num_[i];
  return QSeries(g, vmin_ * r, order_ * r, std::move(num), den_);
}

QSeries QSeries::projected(long new_denom) const {
  if (new_denom == denom()) return *this;
  if (new_denom <= 0 || denom() % new_denom != 0) {
    throw SeriesError("cannot project grid 1/" + std::to_string(denom()) + " to 1/" +
                      std::to_string(new_denom));
  }
  const long r = denom() / new_denom;
  ExponentGrid g(new_denom);
  const long new_order = floor_div(order_, r);
  if (is_zero()) return zero(g, new_order);
  for (std::size_t i = 0; i < num_.size(); ++i) {
    const long k = vmin_ + static_cast<long>(i);
    if (sgn(num_[i]) != 0 && k % r != 0) {
      throw SeriesError("projection to 1/" + std::to_string(new_denom) +
                        " drops nonzero coefficient at exponent " + index_exponent(k, denom()));
    }
  }
  const long new_vmin = vmin_ / r;
  std::vector<mpz_class> num(static_cast<std::size_t>(std::max(0L, new_order - new_vmin + 1)));
  for (long k = new_vmin; k <= new_order; ++k) {
    num[static_cast<std::size_t>(k - new_vmin)] = num_[static_cast<std::size_t>(k * r - vmin_)];
  }
  return QSeries(g, new_vmin, new_order, std::move(num), den_);
}

QSeries QSeries::compacted() const {
  if (is_zero()) return *this;
  long g = denom();
  for (std::size_t i = 0; i < num_.size() && g > 1; ++i) {
    if (sgn(num_[i]) != 0) g = std::gcd(g, vmin_ + static_cast<long>(i));
  }
  return projected(denom() / g);
}

QSeries QSeries::operator-() const {
  QSeries r = *this;
  for (auto& c : r.num_) c = -c;
  return r;
}

QSeries& QSeries::operator+=(const QSeries& other) {
  const long d = std::lcm(denom(), other.denom());
  QSeries a = rescaled(d);
  QSeries b = other.rescaled(d);
  const long order = std::min(a.order_, b.order_);
  const long vmin = std::min(a.vmin_, b.vmin_);
  if (vmin > order) {
    *this = zero(ExponentGrid(d), order);
    return *this;
  }
  mpz_class den;
  mpz_lcm(den.get_mpz_t(), a.den_.get_mpz_t(), b.den_.get_mpz_t());
  const mpz_class fa = den / a.den_;
  const mpz_class fb = den / b.den_;
  std::vector<mpz_class> num(static_cast<std::size_t>(order - vmin + 1));
  for (long k = std::max(vmin, a.vmin_); k <= std::min(order, a.order_); ++k) {
    const auto& c = a.num_[static_cast<std::size_t>(k - a.vmin_)];
    num[static_cast<std::size_t>(k - vmin)] = fa == 1 ? c : mpz_class(c * fa);
  }
  for (long k = std::max(vmin, b.vmin_); k <= std::min(order, b.order_); ++k) {
    const auto& c = b.num_[static_cast<std::size_t>(k - b.vmin_)];
    if (fb == 1) num[static_cast<std::size_t>(k - vmin)] += c;
    else mpz_addmul(num[static_cast<std::size_t>(k - vmin)].get_mpz_t(), c.get_mpz_t(), fb.get_mpz_t());
  }
  *this = QSeries(ExponentGrid(d), vmin, order, std::move(num), den);
  return *this;
}

QSeries& QSeries::operator-=(const QSeries& other) { return *this += -other; }

QSeries& QSeries::operator*=(const QSeries& other) {
  *this = mul(*this, other);
  return *this;
}

QSeries& QSeries::operator*=(const mpq_class& c) {
  if (sgn(c) == 0) {
    *this = zero(grid_, order_);
    return *this;
  }
  for (auto& x : num_) x *= c.get_num();
  *this = QSeries(grid_, vmin_, order_, std::move(num_), den_ * c.get_den());
  return *this;
}

QSeries add(const QSeries& a, const QSeries& b) { return a + b; }
QSeries sub(const QSeries& a, const QSeries& b) { return a - b; }


QSeries QSeries::product(const QSeries& x, const QSeries& y, bool serial) {
  const long d = std::lcm(x.denom(), y.denom());
  const QSeries a = x.rescaled(d);
  const QSeries b = y.rescaled(d);
  const long vmin = a.vmin_ + b.vmin_;
  const long order = std::min(a.order_ + b.vmin_, b.order_ + a.vmin_);
  ExponentGrid g(d);
  if (a.is_zero() || b.is_zero() || order < vmin) return zero(g, order);
  const auto len = static_cast<std::size_t>(order - vmin + 1);
  std::vector<mpz_class> num = serial ? kernels::cauchy_product_serial(a.num_, b.num_, len)
                                      : kernels::cauchy_product(a.num_, b.num_, len);
  return QSeries(g, vmin, order, std::move(num), a.den_ * b.den_);
}

QSeries mul(const QSeries& a, const QSeries& b) { return QSeries::product(a, b, false); }
QSeries mul_serial(const QSeries& a, const QSeries& b) { return QSeries::product(a, b, true); }

QSeries invert(const QSeries& a) {
  if (a.is_zero()) throw SeriesError("not invertible: zero series");
  const std::size_t len = a.num_.size();
  // a = q^v * (g/den) * A with A primitive, A[0] = u
  mpz_class g = 0;
  for (const auto& c : a.num_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  std::vector<mpz_class> A(len);
  for (std::size_t i = 0; i < len; ++i) mpz_divexact(A[i].get_mpz_t(), a.num_[i].get_mpz_t(), g.get_mpz_t());
  const std::vector<std::size_t> nz = kernels::nonzero_indices(A);
  const mpz_class u = A[0];

  std::vector<mpz_class> B(len);
  mpz_class den = 1;
  if (u == 1 || u == -1) {
    B[0] = u;
    for (std::size_t k = 1; k < len; ++k) {
      mpz_class acc = 0;
      for (std::size_t i : nz) {
        if (i == 0) continue;
        if (i > k) break;
        mpz_addmul(acc.get_mpz_t(), A[i].get_mpz_t(), B[k - i].get_mpz_t());
      }
      B[k] = u == 1 ? mpz_class(-acc) : acc;
    }
  } else {
    // 1/A = sum C_k / u^{k+1} q^k with C_k = -sum_{i>=1} A_i C_{k-i} u^{i-1}
    std::vector<mpz_class> upow(len + 1);
    upow[0] = 1;
    for (std::size_t i = 1; i <= len; ++i) upow[i] = upow[i - 1] * u;
    B[0] = 1;
    mpz_class t;
    for (std::size_t k = 1; k < len; ++k) {
      mpz_class acc = 0;
      for (std::size_t i : nz) {
        if (i == 0) continue;
        if (i > k) break;
        t = A[i] * upow[i - 1];
        mpz_addmul(acc.get_mpz_t(), t.get_mpz_t(), B[k - i].get_mpz_t());
      }
      B[k] = -acc;
    }
    for (std::size_t k = 0; k < len; ++k) B[k] *= upow[len - 1 - k];
    den = upow[len];
  }
  // multiply by den_a / g
  for (auto& c : B) c *= a.den_;
  return QSeries(a.grid_, -a.vmin_, a.order_ - 2 * a.vmin_, std::move(B), den * g);
}

QSeries pow(const QSeries& a, long e) {
  if (e < 0) return pow(invert(a), -e);
  if (e == 0) {
    const long rel = a.is_zero() ? std::max(0L, a.order()) : a.order() - a.vmin();
    return QSeries::constant(1, a.grid(), rel);
  }
  QSeries base = a;
  std::optional<QSeries> acc;
  while (true) {
    if (e & 1) acc = acc ? mul(*acc, base) : base;
    e >>= 1;
    if (e == 0) break;
    base = mul(base, base);
  }
  return *acc;
}

QSeries substitute(const QSeries& a, long num, long den, int sign) {
  if (num <= 0 || den <= 0 || (sign != 1 && sign != -1)) {
    throw SeriesError("substitute: only q^(1/D) -> +-q^(num/(D*den)) with num, den > 0 is supported");
  }
  ExponentGrid g(a.denom() * den);
  const long order = a.order_ * num;
  if (a.is_zero()) return QSeries::zero(g, order);
  const long vmin = a.vmin_ * num;
  std::vector<mpz_class> out(static_cast<std::size_t>(order - vmin + 1));
  for (std::size_t i = 0; i < a.num_.size(); ++i) {
    const long k = a.vmin_ + static_cast<long>(i);
    const bool flip = sign < 0 && (k % 2 != 0);
    out[i * static_cast<std::size_t>(num)] = flip ? mpz_class(-a.num_[i]) : a.num_[i];
  }
  return QSeries(g, vmin, order, std::move(out), a.den_);
}

QSeries mul_binomial(const QSeries& a, long step, int sign, long exponent) {
  if (step <= 0) throw SeriesError("mul_binomial: step must be positive");
  if (a.is_zero()) return a;
  std::vector<mpz_class> num = a.num_;
  kernels::apply_binomial(num, static_cast<std::size_t>(step), sign, exponent);
  return QSeries(a.grid_, a.vmin_, a.order_, std::move(num), a.den_);
}

QSeries infinite_product(ExponentGrid grid, long order, std::span<const BinomialFactor> factors) {
  if (order < 0) return QSeries::zero(grid, order);
  const auto len = static_cast<std::size_t>(order + 1);
  // Factors sharing |e| are expanded together with exponent +-1, then raised once.
  std::map<long, std::vector<BinomialFactor>> by_power;
  for (const auto& f : factors) {
    if (f.offset <= 0 || f.step <= 0) throw SeriesError("infinite_product: offset and step must be positive");
    if (f.sign != 1 && f.sign != -1) throw SeriesError("infinite_product: sign must be +-1");
    if (f.exponent == 0) continue;
    by_power[std::abs(f.exponent)].push_back(f);
  }
  QSeries result = QSeries::constant(1, grid, order);
  for (const auto& [power, group] : by_power) {
    std::vector<mpz_class> base(len);
    base[0] = 1;
    for (const auto& f : group) {
      const long e = f.exponent > 0 ? 1 : -1;
      for (long k = f.offset; k <= order; k += f.step) {
        kernels::apply_binomial(base, static_cast<std::size_t>(k), f.sign, e);
      }
    }
    QSeries b = QSeries::from_integers(grid, 0, std::move(base), order);
    result = mul(result, pow(b, power));
  }
  return result;
}

Agreement compare(const QSeries& x, const QSeries& y) {
  const long d = std::lcm(x.denom(), y.denom());
  const QSeries a = x.rescaled(d);
  const QSeries b = y.rescaled(d);
  Agreement r;
  const long order = std::min(a.order(), b.order());
  r.checked_through = mpq_class(order, d);
  r.checked_through.canonicalize();
  for (long k = std::min(a.vmin(), b.vmin()); k <= order; ++k) {
    if (a.at(k) != b.at(k)) {
      r.equal = false;
      r.first_mismatch = mpq_class(k, d);
      r.first_mismatch->canonicalize();
      break;
    }
  }
  return r;
}

Dominance dominates(const QSeries& x, const QSeries& y, const mpq_class& from) {
  const long d = std::lcm(x.denom(), y.denom());
  const QSeries a = x.rescaled(d);
  const QSeries b = y.rescaled(d);
  mpq_class start_q = from * d;
  mpz_class start_z;
  mpz_cdiv_q(start_z.get_mpz_t(), start_q.get_num_mpz_t(), start_q.get_den_mpz_t());
  const long start = std::max(start_z.get_si(), std::min(a.vmin(), b.vmin()));
  const long order = std::min(a.order(), b.order());
  Dominance r;
  for (long k = start; k <= order; ++k) {
    if (a.at(k) > b.at(k)) {
      r.holds = false;
      r.first_violation = mpq_class(k, d);
      r.first_violation->canonicalize();
      break;
    }
  }
  return r;
}

nlohmann::json to_json(const QSeries& a) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (long k = a.vmin(); k <= a.order(); ++k) coeffs.push_back(a.at(k).get_str());
  return {{"denom", a.denom()}, {"vmin", a.vmin()}, {"order", a.order()}, {"coeffs", coeffs}};
}

QSeries series_from_json(const nlohmann::json& j) {
  const long d = j.at("denom").get<long>();
  const long vmin = j.at("vmin").get<long>();
  const long order = j.at("order").get<long>();
  std::vector<mpq_class> coeffs;
  for (const auto& c : j.at("coeffs")) {
    mpq_class v(c.get<std::string>());
    v.canonicalize();
    coeffs.push_back(v);
  }
  if (static_cast<long>(coeffs.size()) != std::max(0L, order - vmin + 1)) {
    throw SeriesError("series json: coefficient count does not match order - vmin + 1");
  }
  return QSeries::from_rationals(ExponentGrid(d), vmin, coeffs, order);
}

std::string exponent_to_string(const mpq_class& e) {
  if (e.get_den() == 1) return e.get_num().get_str();
  return "(" + e.get_str() + ")";
}

std::string to_string(const QSeries& a, std::size_t max_terms) {
  std::ostringstream os;
  std::size_t shown = 0;
  for (long k = a.vmin(); k <= a.order() && shown < max_terms; ++k) {
    mpq_class c = a.at(k);
    if (sgn(c) == 0) continue;
    mpq_class e(k, a.denom());
    e.canonicalize();
    if (shown > 0) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    mpq_class m = abs(c);
    const bool unit = m == 1 && sgn(e) != 0;
    if (!unit) os << m.get_str();
    if (sgn(e) != 0) {
      if (!unit) os << "*";
      os << "q";
      if (e != 1) os << "^" << exponent_to_string(e);
    }
    ++shown;
  }
  if (shown > 0) os << " + ";
  mpq_class next(a.order() + 1, a.denom());
  next.canonicalize();
  os << "O(q^" << exponent_to_string(next) << ")";
  return os.str();
}

}  // namespace qmod
