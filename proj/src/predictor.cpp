#include "qmod/predictor.hpp"

#include <algorithm>
#include <exception>

namespace qmod {

namespace {

// differences below this are working-precision noise, not trend
Real noise_floor() { return Real("1e-20"); }

Real log2r() { return log(Real(2)); }
Real pi2() { return real_pi() * real_pi(); }

int alt(long k) { return (k % 2 == 0) ? 1 : -1; }

AsymptoticModel model(const Real& A, const Real& beta, const Real& gamma, const Real& const_m) {
  AsymptoticModel m;
  m.A = A;
  m.B = 2 * A;
  m.alpha = A;
  m.beta = beta;
  m.gamma = gamma;
  m.const_m = const_m;
  return m;
}

ProductForm scaled(ProductForm f, const mpz_class& c, const mpq_class& k0, std::string name) {
  f.coeff *= c;
  f.k0 += k0;
  f.name = std::move(name);
  return f;
}

// H2 or H3 as a series in q, assembled from the two half-integer branches.
QSeries h_from_branches(int i, long order) {
  return (h_branch(i, 1, order) + h_branch(i, -1, order)).projected(1);
}

Real saddle_log(const SaddleTerm& t, long n) {
  const long N = t.index_mul * n + t.index_add;
  const Real rho = solve_saddle(t.model, N);
  return t.log_multiplier + pf_log(t.form, rho) - log(2 * real_pi() * t.model.B / pow(rho, 3)) / 2 + N * rho;
}

// log(sum exp(x_i)) without overflow
Real log_sum_exp(const std::vector<Real>& xs) {
  Real m = *std::max_element(xs.begin(), xs.end());
  Real s = 0;
  for (const auto& x : xs) s += exp(x - m);
  return m + log(s);
}

Real lsq_slope(const std::vector<Real>& x, const std::vector<Real>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0;
  Real mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  Real sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx == 0 ? Real(0) : Real(sxy / sxx);
}

std::vector<Family> make_catalog() {
  const Real pi = real_pi(), p2 = pi2(), l2 = log2r();
  const Real three_q = Real(3) / 4;
  std::vector<Family> c;
  auto plus = [](long) { return 1; };
  auto ident = [](long n) { return n; };

  const AsymptoticModel m_h23 = model(2 * p2, 0, -l2, 0);
  const AsymptoticModel m_4pi2 = model(4 * p2, 0, 0, 0);

  {
    Family f;
    f.name = "c";
    f.description = "Fourier coefficients of j, predicted from the H2 and H3 branch main terms";
    f.build = [](long n) { return j_function(n); };
    f.exponent_of = ident;
    f.sign_of = plus;
    f.saddle = {{forms::H2star(), m_h23, 2, 0, l2}, {forms::H3star(), m_h23, 2, 0, l2}};
    f.closed = {-l2 / 2, 4 * pi, three_q};
    c.push_back(f);
  }
  {
    Family f;
    f.name = "h1star";
    f.description = "coefficients of prod (1-t^n)^-24";
    f.build = [](long n) { return pf_expand(forms::H1star(), ExponentGrid(1), n); };
    f.exponent_of = ident;
    f.sign_of = plus;
    f.saddle = {{forms::H1star(), model(4 * p2, 12, -12 * log(2 * pi), 0), 1, 0, 0}};
    f.closed = {-l2 / 2, 4 * pi, Real(27) / 4};
    f.sweep_from = 400;
    f.sweep_to = 2000;
    c.push_back(f);
  }
  for (int i : {2, 3}) {
    Family f;
    f.name = "h" + std::to_string(i);
    f.description = "coefficients of H" + std::to_string(i) + " in q";
    f.build = [i](long n) { return h_from_branches(i, n); };
    f.exponent_of = ident;
    f.sign_of = plus;
    f.saddle = {{i == 2 ? forms::H2star() : forms::H3star(), m_h23, 2, 0, l2}};
    f.closed = {-3 * l2 / 2, 4 * pi, three_q};
    c.push_back(f);
  }
  {
    Family f;
    f.name = "d2";
    f.description = "coefficients of j_2, signs (-1)^(n-1)";
    f.alternating = true;
    f.build = [](long n) { return hauptmodul(2, n); };
    f.exponent_of = ident;
    f.sign_of = [](long n) { return alt(n - 1); };
    f.saddle = {{forms::j2star(), model(p2, 0, 0, -1), 1, 0, 0}};
    f.closed = {-l2, 2 * pi, three_q};
    f.sweep_from = 200;
    f.sweep_to = 2000;
    f.sweep_step = 200;
    c.push_back(f);
  }
  {
    Family f;
    f.name = "j2inv";
    f.description = "coefficients of 3*2^16/j_2";
    f.build = [](long n) { return invert(hauptmodul(2, n)); };
    f.exponent_of = ident;
    f.sign_of = plus;
    f.scale = 3 * (mpz_class(1) << 16);
    f.saddle = {{scaled(forms::j2inv(), f.scale, 0, "3*2^16*j2inv"),
                 model(2 * p2, 0, log(Real(3)) + 4 * l2, 1), 1, 0, 0}};
    f.closed = {log(Real(48)) - three_q * l2, 2 * pi * sqrt(Real(2)), three_q};
    c.push_back(f);
  }
  {
    Family f;
    f.name = "j2invsq";
    f.description = "coefficients of 2^24/j_2^2";
    f.build = [](long n) { return pow(invert(hauptmodul(2, n)), 2); };
    f.exponent_of = ident;
    f.sign_of = plus;
    f.scale = mpz_class(1) << 24;
    f.saddle = {{scaled(forms::j2invsq(), f.scale, 0, "2^24*j2invsq"), model(4 * p2, 0, 0, 2), 1, 0, 0}};
    f.n_min = 2;
    f.closed = {-l2 / 2, 4 * pi, three_q};
    c.push_back(f);
  }
  {
    Family f;
    f.name = "j3cubeinv";
    f.description = "coefficients of 3^18/j_3^3";
    f.build = [](long n) { return pow(invert(hauptmodul(3, n)), 3); };
    f.exponent_of = ident;
    f.sign_of = plus;
    mpz_class s;
    mpz_ui_pow_ui(s.get_mpz_t(), 3, 18);
    f.scale = s;
    f.saddle = {{scaled(forms::g(1, 3, 36), s, 3, "3^18*j3^-3"), m_4pi2, 1, 0, 0}};
    f.saddle[0].model.const_m = 3;
    f.n_min = 3;
    f.closed = {-l2 / 2, 4 * pi, three_q};
    c.push_back(f);
  }
  {
    Family f;
    f.name = "j4main";
    f.description = "coefficients of 2^36/(j_4^4 (j_4 + 16))";
    f.build = [](long n) {
      const QSeries j4 = hauptmodul(4, n);
      return invert(pow(j4, 4) * (j4 + QSeries::constant(16, ExponentGrid(1), j4.order())));
    };
    f.exponent_of = ident;
    f.sign_of = plus;
    f.scale = mpz_class(1) << 36;
    f.saddle = {{scaled(forms::g(2, 4, 24) * forms::g(1, 4, 24), f.scale, 5, "2^36*j4^-4/(j4+16)"), m_4pi2, 1,
                 0, 0}};
    f.saddle[0].model.const_m = 5;
    f.n_min = 5;
    f.closed = {-l2 / 2, 4 * pi, three_q};
    c.push_back(f);
  }
  {
    Family f;
    f.name = "d4";
    f.description = "coefficients of j_4 at q^(2n-1), signs (-1)^(n+1)";
    f.alternating = true;
    f.build = [](long n) { return hauptmodul(4, 2 * n - 1); };
    f.exponent_of = [](long n) { return 2 * n - 1; };
    f.sign_of = [](long n) { return alt(n + 1); };
    // The majorant 16 q prod((1-q^{8n})/(1-q^{2n}))^4 lives on odd exponents only, so the
    // saddle is taken in t = q^2 on 16 g(1,4,4) at t^(n-1); in q the lattice span 2 is lost.
    f.saddle = {{scaled(forms::g(1, 4, 4), 16, 0, "16*g(1,4,4)"), model(p2 / 2, 0, 0, 0), 1, -1, 0}};
    f.n_min = 2;
    f.closed = {-5 * l2 / 4, pi * sqrt(Real(2)), three_q};
    f.printed = ClosedAsymptote{-9 * l2 / 4, pi * sqrt(Real(2)), three_q};
    c.push_back(f);
  }
  return c;
}

}  // namespace

Real ClosedAsymptote::operator()(long n) const {
  const Real x = n;
  return log_const + sqrt_coeff * sqrt(x) - log_power * log(x);
}

Real solve_saddle(const AsymptoticModel& model, long n) {
  model.validate();
  if (n < 1) throw PredictorError("saddle index must be >= 1, got " + std::to_string(n));
  return sqrt(model.A / n);
}

Real log_big(const mpz_class& x) {
  if (sgn(x) <= 0) throw PredictorError("log of a nonpositive integer");
  const std::string s = x.get_str();
  const std::size_t lead = std::min<std::size_t>(30, s.size());
  return log(Real(s.substr(0, lead))) + Real(static_cast<long>(s.size() - lead)) * log(Real(10));
}

const std::vector<Family>& family_catalog() {
  static const std::vector<Family> catalog = make_catalog();
  return catalog;
}

std::vector<std::string> family_names() {
  std::vector<std::string> out;
  for (const auto& f : family_catalog()) out.push_back(f.name);
  return out;
}

const Family& family(const std::string& name) {
  for (const auto& f : family_catalog())
    if (f.name == name) return f;
  std::string list;
  for (const auto& n : family_names()) list += (list.empty() ? "" : ", ") + n;
  throw PredictorError("unknown family '" + name + "'; registry: " + list);
}

mpz_class family_value(const Family& f, const QSeries& exact, long n) {
  const mpq_class c = exact.coeff(mpq_class(f.exponent_of(n)));
  if (c.get_den() != 1) throw PredictorError(f.name + ": non-integral coefficient at n=" + std::to_string(n));
  mpz_class v = c.get_num() * f.sign_of(n) * f.scale;
  if (sgn(v) <= 0) throw SignPatternError("sign pattern violated at n=" + std::to_string(n) + " (" + f.name + ")");
  return v;
}

PredictionReport predict(const Family& f, long n) {
  if (n < f.n_min) {
    throw PredictorError(f.name + ": n must be >= " + std::to_string(f.n_min));
  }
  return predict(f, n, f.build(n));
}

PredictionReport predict(const Family& f, long n, const QSeries& exact) {
  if (n < f.n_min) {
    throw PredictorError(f.name + ": n must be >= " + std::to_string(f.n_min));
  }
  PredictionReport r;
  r.n = n;
  r.log_exact = log_big(family_value(f, exact, n));
  r.sign_ok = true;
  const auto& t0 = f.saddle.front();
  r.rho_n = solve_saddle(t0.model, t0.index_mul * n + t0.index_add);
  std::vector<Real> parts;
  for (const auto& t : f.saddle) parts.push_back(saddle_log(t, n));
  r.log_saddle = parts.size() == 1 ? parts.front() : log_sum_exp(parts);
  r.log_closed = f.closed(n);
  r.ratio_saddle = exp(r.log_exact - r.log_saddle);
  r.ratio_closed = exp(r.log_exact - r.log_closed);
  return r;
}

TrendSummary summarize(const std::vector<PredictionReport>& reports) {
  TrendSummary s;
  if (reports.empty()) return s;
  std::vector<Real> x, dev, gap;
  for (const auto& r : reports) {
    x.push_back(1 / sqrt(Real(r.n)));
    dev.push_back(abs(r.ratio_closed - 1));
    gap.push_back(abs(r.log_saddle - r.log_closed));
    if (!(r.ratio_closed > Real("0.5") && r.ratio_closed < 2)) s.in_band = false;
  }
  const std::size_t n = reports.size();
  const std::size_t q0 = n - std::max<std::size_t>(1, n / 4);
  s.max_dev_last_quartile = *std::max_element(dev.begin() + static_cast<long>(q0), dev.end());
  s.first_dev = dev.front();
  s.last_dev = dev.back();
  s.slope = lsq_slope(x, dev);
  s.trend_ok = s.slope > 0;
  s.halved = 2 * s.last_dev <= s.first_dev;
  s.gap_first = gap.front();
  s.gap_last = gap.back();
  s.gap_decreasing = true;
  for (std::size_t i = 1; i < n; ++i)
    if (gap[i] > gap[i - 1] + noise_floor()) s.gap_decreasing = false;
  if (n == 1) s.gap_decreasing = true;
  return s;
}

SweepResult sweep(const Family& f, long n_from, long n_to, long step) {
  if (n_from < std::max<long>(1, f.n_min)) {
    throw PredictorError(f.name + ": sweep must start at n >= " + std::to_string(std::max<long>(1, f.n_min)));
  }
  if (n_to < n_from || step < 1) throw PredictorError("sweep needs n_to >= n_from and step >= 1");
  std::vector<long> ns;
  for (long n = n_from; n <= n_to; n += step) ns.push_back(n);
  const QSeries exact = f.build(ns.back());
  SweepResult out;
  out.family = f.name;
  out.reports.resize(ns.size());
  std::vector<std::exception_ptr> errors(ns.size());
  const long count = static_cast<long>(ns.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      out.reports[static_cast<std::size_t>(i)] = predict(f, ns[static_cast<std::size_t>(i)], exact);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  out.summary = summarize(out.reports);
  return out;
}

EpsilonCheck epsilon_check(const Family& f, const std::vector<Real>& rhos) {
  EpsilonCheck out;
  out.family = f.name;
  out.K = 0;
  const auto& t = f.saddle.front();
  for (const auto& rho : rhos) {
    const Real m = pf_mean(t.form, rho);
    const Real sigma = sqrt(pf_variance(t.form, rho));
    EpsilonRow row{rho, (t.model.A / (rho * rho) - m) / sigma, 0};
    row.k = abs(row.eps) / sqrt(rho);
    out.K = max(out.K, row.k);
    out.rows.push_back(row);
  }
  std::vector<EpsilonRow> sorted = out.rows;
  std::sort(sorted.begin(), sorted.end(), [](const EpsilonRow& a, const EpsilonRow& b) { return a.rho > b.rho; });
  out.decreasing = true;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (abs(sorted[i].eps) > abs(sorted[i - 1].eps) + noise_floor()) out.decreasing = false;
  return out;
}

const std::vector<Table2Row>& table2_rows() {
  static const std::vector<Table2Row> rows = [] {
    std::vector<Table2Row> r;
    const Real p2 = pi2();
    // printed main terms; the N=9 log entry is read as 4 pi^2/(9 lambda)
    const std::vector<std::pair<int, Real>> logc{
        {2, -12 * log(Real(2))}, {3, -6 * log(Real(3))}, {4, -8 * log(Real(2))}, {5, -3 * log(Real(5))},
        {7, -2 * log(Real(7))},  {9, -3 * log(Real(3))}, {13, -log(Real(13))},    {25, -log(Real(5))}};
    for (const auto& [N, lc] : logc) {
      const Real A = N == 2 ? Real(2 * p2) : N == 4 ? p2 : Real(4 * p2 / N);
      r.push_back({"N=" + std::to_string(N), forms::jNinv(N), A, lc, false});
    }
    r.push_back({"Phi_4", forms::phi_inv(4), 0, -4 * log(Real(2)), true});
    r.push_back({"Phi_9", forms::phi_inv(9), 0, -3 * log(Real(3)), true});
    r.push_back({"Phi_25", forms::phi_inv(25), 0, -2 * log(Real(5)), true});
    return r;
  }();
  return rows;
}

bool Table2Report::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Table2Check& c) { return c.passed; });
}

Table2Report verify_table2(const std::vector<Real>& rhos, const std::vector<Real>& lambdas) {
  if (rhos.size() != lambdas.size() || rhos.empty()) {
    throw PredictorError("table2 needs equally many rho and lambda values");
  }
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (!(rhos[i] > 0 && rhos[i] <= Real("0.1") && lambdas[i] > 0 && lambdas[i] <= Real("0.1"))) {
      throw PredictorError("table2 needs rho and lambda in (0, 0.1]");
    }
  }
  Table2Report rep;
  for (const auto& row : table2_rows()) {
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      const Real& rho = rhos[i];
      const Real& lam = lambdas[i];
      Table2Check c;
      c.label = row.label;
      c.rho = rho;
      const Real m = pf_mean(row.form, rho);
      const Real v = pf_variance(row.form, rho);
      const Real l = pf_log(row.form, lam);
      c.mean_scaled = abs(m - row.A / (rho * rho)) * rho;
      c.var_scaled = abs(v - 2 * row.A / pow(rho, 3)) * rho * rho;
      c.log_scaled = abs(l - row.A / lam - row.log_const) / lam;
      c.passed = c.mean_scaled <= 1 && c.var_scaled <= 1 && c.log_scaled <= 1;
      rep.checks.push_back(c);
    }
  }
  return rep;
}

VerificationReport verify_sign_patterns(long order) {
  VerificationReport rep;
  rep.suite = "signs";
  auto run = [&](std::string name, const QSeries& s, long from, long to, auto expected_sign, auto exponent) {
    IdentityCheck c{std::move(name), true, {}, mpq_class(exponent(to)), ""};
    for (long n = from; n <= to; ++n) {
      const mpq_class v = s.coeff(mpq_class(exponent(n)));
      if (sgn(v) != expected_sign(n)) {
        c.passed = false;
        c.first_mismatch = mpq_class(exponent(n));
        c.detail = "n=" + std::to_string(n) + " coefficient " + v.get_str();
        break;
      }
    }
    rep.add(std::move(c));
  };
  auto id = [](long n) { return n; };
  run("(-1)^(n-1) d2_n > 0", hauptmodul(2, order), 1, order, [](long n) { return alt(n - 1); }, id);
  const long n4 = (order + 1) / 2;
  run("(-1)^(n+1) d4_n > 0", hauptmodul(4, 2 * n4 - 1), 1, n4, [](long n) { return alt(n + 1); },
      [](long n) { return 2 * n - 1; });
  run("(-1)^(n-1) h1_n > 0 for n >= 2", h1_closed(order), 2, order, [](long n) { return alt(n - 1); }, id);
  run("h2_n > 0", h_from_branches(2, order), 1, order, [](long) { return 1; }, id);
  run("h3_n > 0", h_from_branches(3, order), 1, order, [](long) { return 1; }, id);
  return rep;
}

std::vector<DominanceRow> main_term_dominance(const std::vector<long>& ns) {
  if (ns.empty()) return {};
  const long top = *std::max_element(ns.begin(), ns.end());
  const QSeries h1 = pf_expand(forms::H1star(), ExponentGrid(1), top);
  const QSeries h2 = h_from_branches(2, top);
  const QSeries h3 = h_from_branches(3, top);
  const QSeries j = j_function(top);
  std::vector<DominanceRow> out;
  for (long n : ns) {
    if (n < 1) throw PredictorError("dominance needs n >= 1");
    const mpz_class a = h1.at(n).get_num(), b = h2.at(n).get_num(), c3 = h3.at(n).get_num();
    const mpz_class cn = j.at(n).get_num();
    DominanceRow r;
    r.n = n;
    r.h1_minus_h2 = log_big(a) - log_big(b) + 6 * log(Real(n)) - log(Real(2));
    const mpz_class rest = abs(mpz_class(cn - b - c3));
    r.rel_rest = sgn(rest) == 0 ? Real(0) : Real(exp(log_big(rest) - log_big(cn)));
    out.push_back(r);
  }
  return out;
}

}  // namespace qmod
