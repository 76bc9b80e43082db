#pragma once

#include "qmod/asymptotics.hpp"
#include "qmod/modforms.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

// Saddle-point coefficient predictor for positive (and alternating) families
// and the catalog of closed-form asymptotes it is compared against.
namespace qmod {

class PredictorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coefficient with the wrong sign after the family's sign map.
class SignPatternError : public PredictorError {
 public:
  using PredictorError::PredictorError;
};

/// One saddle contribution: log(multiplier) + saddle(form, model) at index(n).
struct SaddleTerm {
  ProductForm form;
  AsymptoticModel model;
  long index_mul = 1;  // saddle index = index_mul*n + index_add
  long index_add = 0;
  Real log_multiplier = 0;
};

/// log f_n ~ log_const + sqrt_coeff*sqrt(n) - log_power*log(n)
struct ClosedAsymptote {
  Real log_const, sqrt_coeff, log_power;
  Real operator()(long n) const;
};

struct Family {
  std::string name;
  std::string description;
  bool alternating = false;
  /// Exact series holding the family; must be valid through exponent_of(n_max).
  std::function<QSeries(long n_max)> build;
  std::function<long(long n)> exponent_of;  // q-exponent of the n-th member
  std::function<int(long n)> sign_of;       // expected sign of the raw coefficient
  mpz_class scale = 1;                      // reported value = scale * coefficient
  std::vector<SaddleTerm> saddle;
  ClosedAsymptote closed;
  /// Printed closed form where it differs from the one used in `closed`.
  std::optional<ClosedAsymptote> printed;
  long n_min = 1;
  long sweep_from = 100, sweep_to = 1000, sweep_step = 100;

  const ProductForm& form() const { return saddle.front().form; }
  const AsymptoticModel& model() const { return saddle.front().model; }
};

struct PredictionReport {
  long n = 0;
  Real rho_n, log_exact, log_saddle, log_closed, ratio_saddle, ratio_closed;
  bool sign_ok = true;
};

Real solve_saddle(const AsymptoticModel& model, long n);

/// log of a positive integer from its digit count and leading 30 digits.
Real log_big(const mpz_class& x);

const std::vector<Family>& family_catalog();
const Family& family(const std::string& name);
std::vector<std::string> family_names();

/// Exact coefficient after the sign map and scale; throws on a sign violation.
mpz_class family_value(const Family& f, const QSeries& exact, long n);

PredictionReport predict(const Family& f, long n);
PredictionReport predict(const Family& f, long n, const QSeries& exact);

struct TrendSummary {
  Real max_dev_last_quartile;  // max |ratio_closed - 1| over the last quarter
  Real first_dev, last_dev;    // |ratio_closed - 1| at both ends
  Real slope;                  // LSQ slope of |ratio_closed - 1| against 1/sqrt(n)
  bool in_band = true;         // every ratio_closed within (0.5, 2)
  bool trend_ok = false;       // slope > 0
  bool halved = false;         // last_dev <= first_dev / 2
  Real gap_first, gap_last;    // |log_saddle - log_closed| at both ends
  bool gap_decreasing = false; // gap never rises from one row to the next beyond 1e-20
};

struct SweepResult {
  std::string family;
  std::vector<PredictionReport> reports;
  TrendSummary summary;
};

SweepResult sweep(const Family& f, long n_from, long n_to, long step);
TrendSummary summarize(const std::vector<PredictionReport>& reports);

// Saddle-location hypothesis: eps(rho) = (A/rho^2 - m(rho)) / sigma(rho).
struct EpsilonRow {
  Real rho, eps, k;  // k = |eps|/sqrt(rho)
};
struct EpsilonCheck {
  std::string family;
  std::vector<EpsilonRow> rows;
  Real K;                // max k
  bool decreasing = false;  // |eps| decreasing as rho decreases
};
EpsilonCheck epsilon_check(const Family& f, const std::vector<Real>& rhos);

// Table 2 ------------------------------------------------------------------

struct Table2Row {
  std::string label;
  ProductForm form;
  Real A;          // mean main term A/rho^2 (0 for the Phi rows)
  Real log_const;  // additive constant of the log main term
  bool phi = false;
};
const std::vector<Table2Row>& table2_rows();

struct Table2Check {
  std::string label;
  Real rho, mean_scaled, var_scaled, log_scaled;  // normalized residuals, bounded by 1 to pass
  bool passed = false;
};
struct Table2Report {
  std::vector<Table2Check> checks;
  bool passed() const;
};
Table2Report verify_table2(const std::vector<Real>& rhos, const std::vector<Real>& lambdas);

// Exact-coefficient structure --------------------------------------------

/// d2, d4, H1 tail, h2, h3 signs on every coefficient through `order`.
VerificationReport verify_sign_patterns(long order);

struct DominanceRow {
  long n;
  Real h1_minus_h2;  // log h1*_n - log h2_n + 6 log n - log 2
  Real rel_rest;     // |c_n - h2_n - h3_n| / c_n
};
std::vector<DominanceRow> main_term_dominance(const std::vector<long>& ns);

}  // namespace qmod
