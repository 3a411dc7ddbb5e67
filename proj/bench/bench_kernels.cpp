// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels for the constraint reductions, plus one
// full bisection solve. Run with --benchmark_filter to pick a size.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fairidr/kernels.hpp"

namespace {

struct Rows {
  std::vector<double> psi;
  std::vector<double> delta;
};

Rows make_rows(std::size_t n) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> z(0.0, 1.0);
  std::bernoulli_distribution s(0.6);
  Rows rows;
  rows.psi.resize(n);
  rows.delta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows.psi[i] = s(rng) ? 1.0 / 0.6 : -1.0 / 0.4;
    rows.delta[i] = z(rng) + 0.3 * rows.psi[i];
  }
  return rows;
}

void BM_SmoothedSerial(benchmark::State& state) {
  const Rows rows = make_rows(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fairidr::kernels::smoothed_constraint_serial(
        rows.psi, rows.delta, 0.25, 0.4, rows.psi.size()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SmoothedParallel(benchmark::State& state) {
  const Rows rows = make_rows(static_cast<std::size_t>(state.range(0)));
  fairidr::kernels::set_kernel_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fairidr::kernels::smoothed_constraint(rows.psi, rows.delta, 0.25, 0.4, rows.psi.size()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  fairidr::kernels::set_kernel_threads(0);
}

void BM_IndicatorSerial(benchmark::State& state) {
  const Rows rows = make_rows(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fairidr::kernels::indicator_constraint_serial(
        rows.psi, rows.delta, 0.25, rows.psi.size()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_IndicatorParallel(benchmark::State& state) {
  const Rows rows = make_rows(static_cast<std::size_t>(state.range(0)));
  fairidr::kernels::set_kernel_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fairidr::kernels::indicator_constraint(rows.psi, rows.delta, 0.25, rows.psi.size()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  fairidr::kernels::set_kernel_threads(0);
}

// 60 bisection steps on [-K, K]: the per-group cost of one fair-rule fit.
template <bool kParallel>
void BM_Bisection(benchmark::State& state) {
  const Rows rows = make_rows(static_cast<std::size_t>(state.range(0)));
  const std::size_t n = rows.psi.size();
  if (kParallel) fairidr::kernels::set_kernel_threads(static_cast<int>(state.range(1)));
  auto g = [&](double w) {
    using namespace fairidr::kernels;
    return kParallel ? smoothed_constraint(rows.psi, rows.delta, w, 0.4, n)
                     : smoothed_constraint_serial(rows.psi, rows.delta, w, 0.4, n);
  };
  for (auto _ : state) {
    double lo = -20.0;
    double hi = 20.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) > 0.05 ? lo : hi) = mid;
    }
    benchmark::DoNotOptimize(lo);
  }
  fairidr::kernels::set_kernel_threads(0);
}

BENCHMARK(BM_SmoothedSerial)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_SmoothedParallel)
    ->ArgsProduct({benchmark::CreateRange(1 << 10, 1 << 22, 8), {1, 2, 4}})
    ->UseRealTime();
BENCHMARK(BM_IndicatorSerial)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_IndicatorParallel)
    ->ArgsProduct({benchmark::CreateRange(1 << 10, 1 << 22, 8), {1, 2, 4}})
    ->UseRealTime();
BENCHMARK_TEMPLATE(BM_Bisection, false)->Arg(1 << 16);
BENCHMARK_TEMPLATE(BM_Bisection, true)
    ->Args({1 << 16, 1})
    ->Args({1 << 16, 4})
    ->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
