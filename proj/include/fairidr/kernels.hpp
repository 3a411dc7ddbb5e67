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

#ifndef FAIRIDR_KERNELS_HPP_
#define FAIRIDR_KERNELS_HPP_

// Row reductions behind the fairness constraint. Each kernel has a plain
// sequential `_serial` reference and an OpenMP version. The OpenMP versions
// sum fixed-size blocks and then add the block partials in block order, so
// their result does not depend on the thread count.

#include <cstddef>
#include <span>

namespace fairidr::kernels {

inline constexpr std::size_t kReductionBlock = 2048;

double normal_cdf(double x);

/// (1/n) * sum_i psi_i * Phi((delta_i - omega * psi_i) / h) over the rows of
/// one group; rows outside the group contribute nothing and are not passed.
double smoothed_constraint_serial(std::span<const double> psi, std::span<const double> delta,
                                  double omega, double h, std::size_t n);
double smoothed_constraint(std::span<const double> psi, std::span<const double> delta,
                           double omega, double h, std::size_t n);

/// (1/n) * sum_i psi_i * I(delta_i - omega * psi_i > 0).
double indicator_constraint_serial(std::span<const double> psi, std::span<const double> delta,
                                   double omega, std::size_t n);
double indicator_constraint(std::span<const double> psi, std::span<const double> delta,
                            double omega, std::size_t n);

/// Number of threads OpenMP kernels use; 0 leaves the runtime default.
void set_kernel_threads(int threads);
int kernel_threads();

}  // namespace fairidr::kernels

#endif  // FAIRIDR_KERNELS_HPP_
