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

#include <algorithm>
#include <cmath>
#include <random>

#include "fairidr/error.hpp"
#include "fairidr/simgen.hpp"

namespace fairidr {

namespace {

double sign(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform() { return uniform_(rng_); }
  bool bernoulli(double p) { return uniform() < p; }
  int treatment() { return bernoulli(0.5) ? 1 : -1; }

  // Rejection sampler; acceptance probability is 1 - 1.5e-23 at the bound.
  double truncated_normal(double bound) {
    while (true) {
      const double v = normal();
      if (std::abs(v) <= bound) return v;
    }
  }

  int poisson(double mean) { return std::poisson_distribution<int>(mean)(rng_); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

double case_effect(int case_id, std::span<const double> x, int s, int l) {
  switch (case_id) {
    case 1:
      return (std::abs(x[0] - x[1]) + 0.5) * sign(x[0] - x[1]) + s;
    case 2:
      return (s * (x[0] - x[1]) * (x[0] - x[1]) + 0.5) * sign(x[0] - x[1] * x[1]) + s;
    case 3:
      return x[0] - x[1] * x[1] + std::sin(x[2] * x[3]) + std::log(std::abs(x[4]) + 0.1) -
             2.0 * s + l;
    case 4:
      return x[0] * x[1] + std::exp(x[2]) + std::abs(x[3]) + x[4] + 2.0 * s + l;
    default:
      throw ConfigError("unknown simulation case " + std::to_string(case_id));
  }
}

}  // namespace

std::size_t case_dimension(int case_id) {
  switch (case_id) {
    case 1:
    case 2:
      return 3;
    case 3:
    case 4:
      return 30;
    default:
      throw ConfigError("unknown simulation case " + std::to_string(case_id));
  }
}

Dataset generate(int case_id, std::size_t n, std::uint64_t seed) {
  const std::size_t p = case_dimension(case_id);
  Draws draw(seed);
  std::vector<Sample> rows(n);
  for (auto& smp : rows) {
    smp.x.resize(p);
    for (double& v : smp.x) v = draw.truncated_normal(kTruncation);
    const double x1sq = smp.x[0] * smp.x[0];
    const double denom = 2.0 * x1sq + smp.x[1] * smp.x[1];
    smp.s = draw.bernoulli(denom > 0.0 ? x1sq / denom : 0.5) ? 1 : 0;
    smp.l = 0;
    if (case_id >= 3) {
      const double eta =
          1.0 - 2.0 * smp.x[2] + smp.x[3] - 2.0 * smp.x[4] * smp.x[4] - static_cast<double>(smp.s);
      smp.l = draw.bernoulli(1.0 / (1.0 + std::exp(eta))) ? 1 : 0;
    }
    smp.a = draw.treatment();
    smp.r = case_effect(case_id, smp.x, smp.s, smp.l) * smp.a + draw.normal();
  }
  return Dataset(std::move(rows), p);
}

double oracle_cate(int case_id, std::span<const double> x, int s, int l) {
  if (x.size() < case_dimension(case_id)) throw ShapeError("covariate vector too short");
  return 2.0 * case_effect(case_id, x, s, l);
}

CateOracle case_oracle(int case_id) {
  case_dimension(case_id);
  return [case_id](const Sample& smp) { return oracle_cate(case_id, smp.x, smp.s, smp.l); };
}

Dataset generate_s_invariant_toy(std::size_t n, std::uint64_t seed) {
  Draws draw(seed);
  std::vector<Sample> rows(n);
  for (auto& smp : rows) {
    smp.x = {draw.normal(), draw.normal()};
    smp.s = draw.bernoulli(0.5) ? 1 : 0;
    smp.a = draw.treatment();
    smp.r = 0.5 * s_invariant_toy_cate(smp.x, smp.s) * smp.a + draw.normal();
  }
  return Dataset(std::move(rows), 2);
}

double s_invariant_toy_cate(std::span<const double> x, int s) {
  return 2.0 * (s + 1) * sign(x[0] - x[1]) + 2.0 * s;
}

Dataset generate_insurance_like(std::size_t n, std::uint64_t seed) {
  constexpr std::size_t kCovariates = 24;
  constexpr int kConditions = 16;
  Draws draw(seed);
  std::vector<Sample> rows(n);
  for (auto& smp : rows) {
    const double age = 19.0 + 45.0 * draw.uniform();
    // Household income as a percentage of the federal poverty line.
    const double income = std::max(0.0, 15.0 + 12.0 * draw.normal());
    const double family = 1.0 + draw.poisson(1.2);
    const double education = std::floor(4.0 * draw.uniform()) + 1.0;
    const double er_visits = draw.poisson(0.9);
    const double health = std::floor(5.0 * draw.uniform()) + 1.0;
    const double female = draw.bernoulli(0.55) ? 1.0 : 0.0;

    smp.x = {(age - 40.0) / 12.0, (income - 15.0) / 12.0, family, education,
             er_visits, health, female};
    double n_conditions = 0.0;
    for (int k = 0; k < kConditions; ++k) {
      const double rate = 0.05 + 0.01 * k + 0.03 * smp.x[0];
      const double has = draw.bernoulli(std::clamp(rate, 0.01, 0.9)) ? 1.0 : 0.0;
      n_conditions += has;
      smp.x.push_back(has);
    }
    smp.x.push_back(draw.normal());  // unexplained baseline need

    const double logit = 1.6 - 0.25 * smp.x[0] + 0.05 * (education - 2.5) - 0.04 * income / 10.0;
    smp.s = draw.bernoulli(1.0 / (1.0 + std::exp(-logit))) ? 1 : 0;
    smp.l = income < 10.0 ? 1 : (income <= 20.0 ? 2 : 3);
    smp.a = draw.treatment();

    // Negative amount owed; coverage reduces debt more for high-need and
    // English-speaking enrollees (who navigate enrollment more easily).
    const double baseline = -(600.0 + 250.0 * er_visits + 180.0 * n_conditions +
                              120.0 * (5.0 - health) + 80.0 * smp.x[23]);
    const double effect = 120.0 + 160.0 * (er_visits - 0.9) + 90.0 * (n_conditions - 1.5) +
                          220.0 * smp.s - 60.0 * smp.x[0] + 40.0 * (3 - smp.l);
    smp.r = baseline + 0.5 * effect * smp.a + 400.0 * draw.normal();
  }
  return Dataset(std::move(rows), kCovariates);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace fairidr
