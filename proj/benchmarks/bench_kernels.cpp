// SPDX-License-Identifier: Apache-2.0
// Timings for the multilinear kernels, the offline decompositions and the
// online local-basis step.
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "trom/decomp.hpp"
#include "trom/rom.hpp"
#include "trom/sampling.hpp"
#include "trom/tensor.hpp"

namespace {

using namespace trom;

DenseTensor random_tensor(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(dims_product(dims));
  for (double& x : v) x = g(rng);
  return DenseTensor(dims, std::move(v));
}

/// Smooth snapshot-like tensor of shape (m, k1, k2, n) with fast spectral decay.
DenseTensor smooth_tensor(std::size_t m, std::size_t k1, std::size_t k2, std::size_t n) {
  std::vector<double> v;
  v.reserve(m * k1 * k2 * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < k1; ++a)
      for (std::size_t b = 0; b < k2; ++b)
        for (std::size_t t = 0; t < n; ++t) {
          const double x = static_cast<double>(i) / static_cast<double>(m);
          const double p = 0.1 + static_cast<double>(a) / static_cast<double>(k1);
          const double q = static_cast<double>(b) / static_cast<double>(k2);
          const double s = static_cast<double>(t + 1) / static_cast<double>(n);
          v.push_back(q * std::exp(-p * s) * std::sin(3.0 * x + p) + std::exp(-x * s));
        }
  return DenseTensor({m, k1, k2, n}, std::move(v));
}

void BM_KmodeProduct(benchmark::State& state) {
  const std::size_t k = static_cast<std::size_t>(state.range(0));
  const DenseTensor t = random_tensor({200, 9, 9, 50}, 1);
  const std::vector<double> v(t.dim(k), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(kmode_product(t, v, k));
}
BENCHMARK(BM_KmodeProduct)->DenseRange(0, 3);

void BM_Unfold(benchmark::State& state) {
  const std::size_t k = static_cast<std::size_t>(state.range(0));
  const DenseTensor t = random_tensor({200, 9, 9, 50}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(unfold(t, k));
}
BENCHMARK(BM_Unfold)->DenseRange(0, 3);

void BM_Hosvd(benchmark::State& state) {
  const DenseTensor t = smooth_tensor(static_cast<std::size_t>(state.range(0)), 9, 9, 50);
  for (auto _ : state) benchmark::DoNotOptimize(hosvd(t, HosvdAccuracy{1e-6}));
}
BENCHMARK(BM_Hosvd)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_TtSvd(benchmark::State& state) {
  const DenseTensor t = smooth_tensor(static_cast<std::size_t>(state.range(0)), 9, 9, 50);
  for (auto _ : state) benchmark::DoNotOptimize(tt_svd(t, 1e-6));
}
BENCHMARK(BM_TtSvd)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_CpAls(benchmark::State& state) {
  const DenseTensor t = smooth_tensor(100, 5, 5, 30);
  CpOptions opt;
  opt.rank = static_cast<std::size_t>(state.range(0));
  opt.max_sweeps = 50;
  for (auto _ : state) benchmark::DoNotOptimize(cp_als(t, opt));
}
BENCHMARK(BM_CpAls)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_LocalBasis(benchmark::State& state) {
  const DenseTensor t = smooth_tensor(400, 9, 9, 50);
  const auto [u, payload] = offline(AnyDecomposition{hosvd(t, HosvdAccuracy{1e-8})});
  const CartesianGrid grid = CartesianGrid::uniform(ParameterBox({0.0, 0.0}, {1.0, 1.0}), {9, 9});
  const std::vector<double> alpha{0.37, 0.61};
  const InterpVectors e = lagrange_vectors(grid, alpha, 2);
  const std::size_t n = std::min<std::size_t>(column_budget(payload), 5);
  for (auto _ : state) benchmark::DoNotOptimize(local_basis(payload, e, n));
}
BENCHMARK(BM_LocalBasis)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
