#include <benchmark/benchmark.h>

#include <random>

#include "conecert/linalg.hpp"

namespace {

using namespace conecert;

Matrix random_symmetric(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = dist(rng);
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i) = dist(rng);
  }
  return m;
}

void BM_jacobi_eigenvalues(benchmark::State& state) {
  const Matrix m = random_symmetric(static_cast<int>(state.range(0)), 1234);
  for (auto _ : state) {
    benchmark::DoNotOptimize(symmetric_eigenvalues(m));
  }
}
BENCHMARK(BM_jacobi_eigenvalues)->Arg(3)->Arg(6)->Arg(12)->Arg(24)->Arg(48);

void BM_cholesky(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Matrix m = random_symmetric(n, 99);
  for (int i = 0; i < n; ++i) m(i, i) += n;  // diagonally dominant, PD
  for (auto _ : state) {
    benchmark::DoNotOptimize(cholesky(m));
  }
}
BENCHMARK(BM_cholesky)->Arg(8)->Arg(32)->Arg(128);

void BM_max_singular_value(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 2 * n; ++j) m(i, j) = dist(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_singular_value(m));
  }
}
BENCHMARK(BM_max_singular_value)->Arg(8)->Arg(40);

}  // namespace
