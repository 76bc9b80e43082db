// Serial reference vs OpenMP Cauchy product on the coefficient shapes the
// library actually multiplies: dense eta powers and sparse theta sums.
#include <benchmark/benchmark.h>

#include "qmod/kernels.hpp"
#include "qmod/qseries.hpp"

#include <vector>

namespace {

std::vector<mpz_class> eta_power(long order, long e) {
  std::vector<qmod::BinomialFactor> f{{-1, 1, 1, e}};
  auto s = qmod::infinite_product(qmod::ExponentGrid(1), order, f);
  return {s.numerators().begin(), s.numerators().end()};
}

std::vector<mpz_class> theta_like(long order) {
  std::vector<mpz_class> v(static_cast<std::size_t>(order + 1));
  for (long n = 0; n * n <= order; ++n) v[static_cast<std::size_t>(n * n)] = n ? 2 : 1;
  return v;
}

void BM_dense_serial(benchmark::State& st) {
  auto a = eta_power(st.range(0), 24);
  for (auto _ : st) benchmark::DoNotOptimize(qmod::kernels::cauchy_product_serial(a, a, a.size()));
}

void BM_dense_omp(benchmark::State& st) {
  auto a = eta_power(st.range(0), 24);
  for (auto _ : st) benchmark::DoNotOptimize(qmod::kernels::cauchy_product(a, a, a.size()));
}

void BM_sparse_serial(benchmark::State& st) {
  auto a = eta_power(st.range(0), 8);
  auto b = theta_like(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(qmod::kernels::cauchy_product_serial(b, a, a.size()));
}

void BM_sparse_omp(benchmark::State& st) {
  auto a = eta_power(st.range(0), 8);
  auto b = theta_like(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(qmod::kernels::cauchy_product(b, a, a.size()));
}

void BM_invert_eta24(benchmark::State& st) {
  std::vector<qmod::BinomialFactor> f{{-1, 1, 1, 24}};
  auto s = qmod::infinite_product(qmod::ExponentGrid(1), st.range(0), f);
  for (auto _ : st) benchmark::DoNotOptimize(qmod::invert(s));
}

}  // namespace

BENCHMARK(BM_dense_serial)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dense_omp)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sparse_serial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sparse_omp)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_invert_eta24)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
