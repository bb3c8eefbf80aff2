// Copyright The mnepv Authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include <benchmark/benchmark.h>

#include "mnepv/mnepv.hpp"

namespace {

using namespace mnepv;

HermitianMatrix random_hermitian(Index n, Rng& rng) {
  Matrix g(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  return HermitianMatrix(Matrix((g + g.adjoint()) * 0.5));
}

Problem random_quadratic(Index n, Index m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<HermitianMatrix> a;
  for (Index i = 0; i < m; ++i) a.push_back(random_hermitian(n, rng));
  return quartic_problem(std::move(a));
}

UnitVector start_vector(Index n) {
  Rng rng(7);
  const RealVector v = rng.unit_vector(n);
  return UnitVector::from_real(v);
}

void BM_SolveAccelerated(benchmark::State& state) {
  const Index n = state.range(0);
  const Problem p = random_quadratic(n, 3, 1);
  const UnitVector x0 = start_vector(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, x0));
}
BENCHMARK(BM_SolveAccelerated)->Arg(20)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SolvePlain(benchmark::State& state) {
  const Index n = state.range(0);
  const Problem p = random_quadratic(n, 3, 1);
  const UnitVector x0 = start_vector(n);
  SolveOptions opts;
  opts.tol_acc = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, x0, opts));
}
BENCHMARK(BM_SolvePlain)->Arg(20)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SolveMatrixFree(benchmark::State& state) {
  const Index n = state.range(0);
  const Problem p = random_quadratic(n, 3, 1);
  const UnitVector x0 = start_vector(n);
  SolveOptions opts;
  opts.dense_max_n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, x0, opts));
}
BENCHMARK(BM_SolveMatrixFree)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_NumericalRadius(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(3);
  Matrix b(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) b(i, j) = Complex(rng.normal(), rng.normal());
  }
  for (auto _ : state) benchmark::DoNotOptimize(numerical_radius(b, SolveOptions{}, {}, 20));
}
BENCHMARK(BM_NumericalRadius)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_DhdaeDistance(benchmark::State& state) {
  const Index n = state.range(0);
  const RealMatrix x = RealMatrix::Random(n, n);
  const RealMatrix j = (x - x.transpose()) / (x - x.transpose()).norm();
  const RealMatrix g = RealMatrix::Random(n, n);
  const std::vector<RealMatrix> b{g * g.transpose() / static_cast<double>(n)};
  for (auto _ : state) benchmark::DoNotOptimize(dhdae_distance(j, b));
}
BENCHMARK(BM_DhdaeDistance)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
