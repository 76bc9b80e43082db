#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <vector>

// Dense big-integer kernels behind QSeries. Both product kernels compute the
// truncated Cauchy product out[k] = sum_{i+j=k} a[i]*b[j] for k < out_len.
namespace qmod::kernels {

// Plain double loop. Kept as the reference the parallel kernel is tested
// and benchmarked against.
std::vector<mpz_class> cauchy_product_serial(std::span<const mpz_class> a,
                                             std::span<const mpz_class> b,
                                             std::size_t out_len);

// OpenMP kernel: parallel over output index, iterating only the nonzero
// entries of the sparser operand. Bit-identical to the serial kernel.
std::vector<mpz_class> cauchy_product(std::span<const mpz_class> a,
                                      std::span<const mpz_class> b,
                                      std::size_t out_len);

// Multiplies f in place by (1 + sign*x^step)^exponent, truncated to f.size().
// Negative exponents divide; the recurrence stays in the integers.
void apply_binomial(std::vector<mpz_class>& f, std::size_t step, int sign, long exponent);

// Indices of nonzero entries, ascending.
std::vector<std::size_t> nonzero_indices(std::span<const mpz_class> a);

}  // namespace qmod::kernels
