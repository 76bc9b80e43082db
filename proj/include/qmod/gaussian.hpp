#pragma once

#include "qmod/asymptotics.hpp"

#include <vector>

// Numerical checks of the strong Gaussian condition and of the fourth-moment
// Lyapunov quantity for product forms with nonnegative coefficients.
namespace qmod {

struct GaussianReport {
  Real rho, sigma, l1_distance, lyapunov_ratio;
  long theta_points = 0;
};

constexpr long kMinThetaPoints = 512;

/// Standardized characteristic function E[e^{i theta Z}] at t = e^{-rho}.
std::complex<long double> standardized_charfn(const ProductForm& form, long double rho, long double sigma,
                                              long double mean, long double theta);

/// L1 distance to e^{-theta^2/2} over [-pi sigma, pi sigma], trapezoid on a graded grid.
GaussianReport char_deviation(const ProductForm& form, const Real& rho, long theta_points = 1024);

/// Cumulants of the n-th group of factors (all factors at product index n).
struct GroupMoments {
  Real k1, k2, k3, k4;
  Real central1;           // E[Y] from raw moments, zero up to rounding
  Real central4;           // kappa4 + 3 kappa2^2
  Real central4_binomial;  // E[X^4] - 4m E[X^3] + 6m^2 E[X^2] - 3m^4
};
GroupMoments group_moments(const ProductForm& form, const Real& rho, long n);

struct LyapunovFourth {
  Real sum4, sigma4, ratio;
};
LyapunovFourth lyapunov_fourth(const ProductForm& form, const Real& rho);

struct LyapunovRow {
  Real rho, sum, scaled, rel_dev;  // scaled = sum * (a rho)^5, rel_dev against the candidate
};
struct LyapunovConstant {
  long a = 1;
  bool odd = false;
  std::vector<LyapunovRow> rows;
  Real candidate;  // 4(z2+3z3+2z4), or 2z2+6z3+4z4 for the odd-index sum
  Real fitted;     // rho -> 0 intercept of a least-squares line through the scaled values
};
/// sum_k k^4 e^{-a k rho}/(1-e^{-a k rho})^4
LyapunovConstant lyapunov_bound_constant(long a, const std::vector<Real>& rhos);
/// sum_k (2k-1)^4 e^{-(2k-1) rho}/(1-e^{-(2k-1) rho})^4
LyapunovConstant lyapunov_odd_constant(const std::vector<Real>& rhos);

/// log-log slope of lyapunov_fourth ratio against rho (least squares).
Real lyapunov_slope(const ProductForm& form, const std::vector<Real>& rhos);

}  // namespace qmod
