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

#ifndef FAIRIDR_TESTS_TEST_SUPPORT_HPP_
#define FAIRIDR_TESTS_TEST_SUPPORT_HPP_

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "fairidr/cate.hpp"
#include "fairidr/dataset.hpp"

namespace fairidr::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("fairidr_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Sample row(std::vector<double> x, int s, int l, int a, double r) {
  Sample smp;
  smp.x = std::move(x);
  smp.s = s;
  smp.l = l;
  smp.a = a;
  smp.r = r;
  return smp;
}

/// Random dataset with `groups` labels, every group holding both S values
/// and both arms. Covariates are standard normal; r is noise unless
/// `effect` is set, in which case r = effect * x1 * a + noise.
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t p, int groups,
                              double effect = 0.0) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> group(0, groups - 1);
  std::bernoulli_distribution coin(0.5);
  std::vector<Sample> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& smp = rows[i];
    smp.x.resize(p);
    for (double& v : smp.x) v = normal(rng);
    // The first 4 rows of each group pin down both S values and both arms.
    const std::size_t slot = i / static_cast<std::size_t>(groups);
    smp.l = i < 4 * static_cast<std::size_t>(groups) ? static_cast<int>(i % groups) : group(rng);
    smp.s = slot < 4 ? static_cast<int>(slot % 2) : (coin(rng) ? 1 : 0);
    smp.a = slot < 4 ? (slot < 2 ? 1 : -1) : (coin(rng) ? 1 : -1);
    smp.r = effect * smp.x[0] * smp.a + normal(rng);
  }
  return Dataset(std::move(rows), p);
}

inline constexpr double kBig = 1e6;

// delta(z) = x1 exactly: m1(z) = x1, m0(z) = 0, clip far away.
inline CateModel identity_cate(std::size_t p) {
  std::vector<double> c1(p + 2, 0.0);
  c1[0] = 1.0;
  return CateModel(FittedRegressor::affine(0.0, c1, kBig),
                   FittedRegressor::affine(0.0, std::vector<double>(p + 2, 0.0), kBig), p);
}

inline Dataset two_point() {
  return Dataset({row({1.0}, 1, 0, 1, 0), row({-1.0}, 0, 0, -1, 0)}, 1);
}

inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Independent evaluation of G_l straight from the definition.
inline double g_oracle(const Dataset& ds, int l, double omega, double h) {
  double n1 = 0;
  double n0 = 0;
  for (const auto& smp : ds) {
    if (smp.l != l) continue;
    (smp.s == 1 ? n1 : n0) += 1.0;
  }
  const double pi1 = n1 / (n1 + n0);
  const double pi0 = n0 / (n1 + n0);
  double acc = 0.0;
  for (const auto& smp : ds) {
    if (smp.l != l) continue;
    const double psi = smp.s == 1 ? 1.0 / pi1 : -1.0 / pi0;
    acc += psi * phi((smp.x[0] - omega * psi) / h);
  }
  return acc / static_cast<double>(ds.size());
}

// Random covariate x1 is the CATE; optional S-dependent shift makes the
// constraint bind.
inline Dataset random_groups(std::mt19937_64& rng, std::size_t n, int groups, double shift) {
  Dataset base = random_dataset(rng, n, 1, groups);
  std::vector<Sample> rows(base.begin(), base.end());
  std::uniform_real_distribution<double> shifts(-shift, shift);
  std::vector<double> per_group(static_cast<std::size_t>(groups));
  for (double& v : per_group) v = shifts(rng);
  for (auto& smp : rows) smp.x[0] += smp.s * per_group[static_cast<std::size_t>(smp.l)];
  return Dataset(std::move(rows), 1);
}

}  // namespace fairidr::testing

#endif  // FAIRIDR_TESTS_TEST_SUPPORT_HPP_
