#include "qmod/gaussian.hpp"

#include <algorithm>
#include <cmath>

namespace qmod {

namespace {

constexpr long kMaxGroups = 10000000;

struct Cumulants {
  Real k1 = 0, k2 = 0, k3 = 0, k4 = 0;
};

// (t d/dt)^j e*log(1 + s t^u), j = 1..4, via w = s x/(1 + s x)
void add_factor(Cumulants& c, int s, const Real& u, long e, const Real& rho) {
  const Real x = exp(-u * rho);
  const Real w = s * x / (1 + s * x);
  const Real v = w * (1 - w);
  const Real u2 = u * u;
  c.k1 += e * u * w;
  c.k2 += e * u2 * v;
  c.k3 += e * u2 * u * v * (1 - 2 * w);
  c.k4 += e * u2 * u2 * v * (1 - 6 * w + 6 * w * w);
}

Cumulants group(const ProductForm& form, const Real& rho, long n, Real* min_u) {
  Cumulants c;
  Real lo = -1;
  for (const auto& f : form.factors) {
    const Real u = to_real(f.offset) + to_real(f.step) * n;
    if (lo < 0 || u < lo) lo = u;
    add_factor(c, f.sign, u, f.exponent, rho);
  }
  if (min_u) *min_u = lo;
  return c;
}

Real lsq_intercept(const std::vector<Real>& x, const std::vector<Real>& y) {
  const std::size_t n = x.size();
  if (n == 1) return y[0];
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
  return sxx == 0 ? my : Real(my - sxy / sxx * mx);
}

// sum_k u_k^4 x_k/(1 - x_k)^4 over u_k = first, first + step, ...
Real fourth_power_sum(const Real& first, const Real& step, const Real& rho) {
  const Real r = exp(-step * rho);
  Real x = exp(-first * rho);
  Real u = first;
  Real sum = 0;
  for (long k = 0; k < kMaxGroups; ++k) {
    const Real d = 1 - x;
    const Real u2 = u * u;
    const Real term = u2 * u2 * x / (d * d * d * d);
    sum += term;
    if (u * rho > 8 && term < Real("1e-30") * sum) return sum;
    u += step;
    x *= r;
  }
  throw AsymptoticsError("fourth-power sum did not converge");
}

LyapunovConstant fit(LyapunovConstant c, const std::vector<Real>& rhos, const std::vector<Real>& sums, long a) {
  std::vector<Real> xs, ys;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    LyapunovRow row;
    row.rho = rhos[i];
    row.sum = sums[i];
    row.scaled = sums[i] * pow(a * rhos[i], 5);
    row.rel_dev = abs(row.scaled / c.candidate - 1);
    xs.push_back(rhos[i]);
    ys.push_back(row.scaled);
    c.rows.push_back(row);
  }
  c.fitted = lsq_intercept(xs, ys);
  return c;
}

void check_rhos(const std::vector<Real>& rhos, const char* what) {
  if (rhos.empty()) throw AsymptoticsError(std::string(what) + ": empty rho list");
  for (const auto& r : rhos) {
    if (!(r > 0 && r <= Real("0.1"))) throw AsymptoticsError(std::string(what) + ": rho must lie in (0, 0.1]");
  }
}

}  // namespace

std::complex<long double> standardized_charfn(const ProductForm& form, long double rho, long double sigma,
                                              long double mean, long double theta) {
  const auto phi = pf_charfn(form, rho, theta / sigma);
  const long double turn = std::fmod(theta * mean / sigma, 2 * 3.14159265358979323846264338327950288L);
  return phi * std::polar(1.0L, -turn);
}

GaussianReport char_deviation(const ProductForm& form, const Real& rho, long theta_points) {
  if (!(rho > 0)) throw AsymptoticsError("rho must be positive");
  if (!form.nonnegative()) {
    throw AsymptoticsError(form.name + ": Gaussian diagnostics need nonnegative coefficients");
  }
  theta_points = std::max(theta_points, kMinThetaPoints);
  GaussianReport rep;
  rep.rho = rho;
  rep.theta_points = theta_points;
  const Real var = pf_variance(form, rho);
  rep.sigma = sqrt(var);
  rep.lyapunov_ratio = lyapunov_fourth(form, rho).ratio;
  if (!(var > 0)) {
    rep.l1_distance = 0;
    return rep;
  }
  const long double sigma = rep.sigma.convert_to<long double>();
  const long double mean = pf_mean(form, rho).convert_to<long double>();
  const long double r = rho.convert_to<long double>();
  const long double edge = 3.14159265358979323846264338327950288L * sigma;
  const long double core = std::min(edge, 40.0L);

  // geometric near 0, uniform on the bulk, geometric again on the far tail
  std::vector<long double> grid{0.0L};
  const long n_near = theta_points / 8, n_tail = edge > core ? theta_points / 4 : 0;
  const long n_bulk = theta_points - n_near - n_tail;
  const long double near_lo = core * 1e-4L, near_hi = core / 16;
  for (long i = 0; i < n_near; ++i) {
    grid.push_back(near_lo * std::pow(near_hi / near_lo, static_cast<long double>(i) / n_near));
  }
  for (long i = 0; i < n_bulk; ++i) {
    grid.push_back(near_hi + (core - near_hi) * static_cast<long double>(i) / (n_bulk - 1));
  }
  for (long i = 1; i <= n_tail; ++i) {
    grid.push_back(core * std::pow(edge / core, static_cast<long double>(i) / n_tail));
  }

  std::vector<long double> f(grid.size());
  const long count = static_cast<long>(grid.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    const long double th = grid[static_cast<std::size_t>(i)];
    const auto z = standardized_charfn(form, r, sigma, mean, th);
    f[static_cast<std::size_t>(i)] = std::abs(z - std::exp(-th * th / 2));
  }
  long double integral = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) integral += (grid[i] - grid[i - 1]) * (f[i] + f[i - 1]) / 2;
  // the integrand is even in theta
  rep.l1_distance = Real(2 * integral);
  return rep;
}

GroupMoments group_moments(const ProductForm& form, const Real& rho, long n) {
  const Cumulants c = group(form, rho, n, nullptr);
  GroupMoments g{c.k1, c.k2, c.k3, c.k4, 0, 0, 0};
  const Real m = c.k1;
  const Real e1 = m;
  const Real e2 = c.k2 + m * m;
  const Real e3 = c.k3 + 3 * c.k2 * m + m * m * m;
  const Real e4 = c.k4 + 4 * c.k3 * m + 3 * c.k2 * c.k2 + 6 * c.k2 * m * m + m * m * m * m;
  g.central1 = e1 - m;
  g.central4 = c.k4 + 3 * c.k2 * c.k2;
  g.central4_binomial = e4 - 4 * m * e3 + 6 * m * m * e2 - 3 * m * m * m * m;
  return g;
}

LyapunovFourth lyapunov_fourth(const ProductForm& form, const Real& rho) {
  if (!(rho > 0 && rho <= Real("0.2"))) throw AsymptoticsError("lyapunov_fourth needs rho in (0, 0.2]");
  LyapunovFourth out{0, 0, 0};
  if (form.factors.empty()) return out;
  for (long n = 0; n < kMaxGroups; ++n) {
    Real lo;
    const Cumulants c = group(form, rho, n, &lo);
    const Real term = c.k4 + 3 * c.k2 * c.k2;
    out.sum4 += term;
    if (lo * rho > 8 && abs(term) < Real("1e-30") * abs(out.sum4)) break;
    if (n + 1 == kMaxGroups) throw AsymptoticsError("fourth-moment sum did not converge");
  }
  const Real var = pf_variance(form, rho);
  out.sigma4 = var * var;
  out.ratio = out.sigma4 > 0 ? Real(out.sum4 / out.sigma4) : Real(0);
  return out;
}

LyapunovConstant lyapunov_bound_constant(long a, const std::vector<Real>& rhos) {
  if (a < 1) throw AsymptoticsError("a must be a positive integer");
  check_rhos(rhos, "lyapunov_bound_constant");
  const auto z = zeta_constants();
  LyapunovConstant c;
  c.a = a;
  c.candidate = 4 * (z.zeta2 + 3 * z.zeta3 + 2 * z.zeta4);
  std::vector<Real> sums;
  for (const auto& r : rhos) sums.push_back(fourth_power_sum(1, 1, a * r));
  return fit(c, rhos, sums, a);
}

LyapunovConstant lyapunov_odd_constant(const std::vector<Real>& rhos) {
  check_rhos(rhos, "lyapunov_odd_constant");
  const auto z = zeta_constants();
  LyapunovConstant c;
  c.odd = true;
  c.candidate = 2 * z.zeta2 + 6 * z.zeta3 + 4 * z.zeta4;
  std::vector<Real> sums;
  for (const auto& r : rhos) sums.push_back(fourth_power_sum(1, 2, r));
  return fit(c, rhos, sums, 1);
}

Real lyapunov_slope(const ProductForm& form, const std::vector<Real>& rhos) {
  std::vector<Real> x, y;
  for (const auto& r : rhos) {
    x.push_back(log(r));
    y.push_back(log(lyapunov_fourth(form, r).ratio));
  }
  const std::size_t n = x.size();
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
  return sxy / sxx;
}

}  // namespace qmod
