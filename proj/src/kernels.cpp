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

#include "fairidr/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <vector>

namespace fairidr::kernels {

namespace {

std::atomic<int> g_threads{0};

int team_size() {
  const int t = g_threads.load(std::memory_order_relaxed);
  return t > 0 ? t : omp_get_max_threads();
}

// Block partials computed in parallel, summed in block order.
template <typename Term>
double blocked_sum(std::size_t rows, Term term) {
  const std::size_t blocks = (rows + kReductionBlock - 1) / kReductionBlock;
  if (blocks <= 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += term(i);
    return acc;
  }
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<long>(blocks);
#pragma omp parallel for schedule(static) num_threads(team_size()) if (!omp_in_parallel())
  for (long b = 0; b < nb; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t end = std::min(rows, begin + kReductionBlock);
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += term(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double smoothed_constraint_serial(std::span<const double> psi, std::span<const double> delta,
                                  double omega, double h, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    acc += psi[i] * normal_cdf((delta[i] - omega * psi[i]) / h);
  }
  return acc / static_cast<double>(n);
}

double smoothed_constraint(std::span<const double> psi, std::span<const double> delta,
                           double omega, double h, std::size_t n) {
  const double total = blocked_sum(psi.size(), [&](std::size_t i) {
    return psi[i] * normal_cdf((delta[i] - omega * psi[i]) / h);
  });
  return total / static_cast<double>(n);
}

double indicator_constraint_serial(std::span<const double> psi, std::span<const double> delta,
                                   double omega, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (delta[i] - omega * psi[i] > 0.0) acc += psi[i];
  }
  return acc / static_cast<double>(n);
}

double indicator_constraint(std::span<const double> psi, std::span<const double> delta,
                            double omega, std::size_t n) {
  const double total = blocked_sum(psi.size(), [&](std::size_t i) {
    return delta[i] - omega * psi[i] > 0.0 ? psi[i] : 0.0;
  });
  return total / static_cast<double>(n);
}

void set_kernel_threads(int threads) { g_threads.store(threads, std::memory_order_relaxed); }

int kernel_threads() { return team_size(); }

}  // namespace fairidr::kernels
