#include "qmod/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace qmod::kernels {

std::vector<mpz_class> cauchy_product_serial(std::span<const mpz_class> a,
                                             std::span<const mpz_class> b,
                                             std::size_t out_len) {
  std::vector<mpz_class> out(out_len);
  for (std::size_t i = 0; i < a.size() && i < out_len; ++i) {
    for (std::size_t j = 0; j < b.size() && i + j < out_len; ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return out;
}

std::vector<std::size_t> nonzero_indices(std::span<const mpz_class> a) {
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0) nz.push_back(i);
  }
  return nz;
}

std::vector<mpz_class> cauchy_product(std::span<const mpz_class> a,
                                      std::span<const mpz_class> b,
                                      std::size_t out_len) {
  std::vector<std::size_t> nz_a = nonzero_indices(a);
  std::vector<std::size_t> nz_b = nonzero_indices(b);
  // iterate the sparser side, index into the denser one
  if (nz_b.size() < nz_a.size()) {
    std::swap(a, b);
    std::swap(nz_a, nz_b);
  }
  std::vector<mpz_class> out(out_len);
  const long n_out = static_cast<long>(out_len);
  const std::size_t b_len = b.size();

#pragma omp parallel for schedule(dynamic, 32)
  for (long kk = 0; kk < n_out; ++kk) {
    const std::size_t k = static_cast<std::size_t>(kk);
    mpz_ptr acc = out[k].get_mpz_t();
    for (std::size_t i : nz_a) {
      if (i > k) break;
      const std::size_t j = k - i;
      if (j >= b_len) continue;
      mpz_srcptr bj = b[j].get_mpz_t();
      if (mpz_sgn(bj) == 0) continue;
      mpz_addmul(acc, a[i].get_mpz_t(), bj);
    }
  }
  return out;
}

void apply_binomial(std::vector<mpz_class>& f, std::size_t step, int sign, long exponent) {
  if (step == 0) throw std::invalid_argument("apply_binomial: step must be positive");
  if (sign != 1 && sign != -1) throw std::invalid_argument("apply_binomial: sign must be +1 or -1");
  const std::size_t n = f.size();
  if (step >= n) return;
  if (exponent > 0) {
    for (long rep = 0; rep < exponent; ++rep) {
      for (std::size_t j = n; j-- > step;) {
        if (sign > 0) f[j] += f[j - step];
        else f[j] -= f[j - step];
      }
    }
  } else {
    for (long rep = 0; rep < -exponent; ++rep) {
      for (std::size_t j = step; j < n; ++j) {
        if (sign > 0) f[j] -= f[j - step];
        else f[j] += f[j - step];
      }
    }
  }
}

}  // namespace qmod::kernels
