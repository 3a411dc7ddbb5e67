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

#ifndef FAIRIDR_SIMGEN_HPP_
#define FAIRIDR_SIMGEN_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "fairidr/cate.hpp"
#include "fairidr/dataset.hpp"
#include "fairidr/fairness.hpp"
#include "fairidr/policy.hpp"

namespace fairidr {

// --- data-generating processes ---------------------------------------------
//
// All four simulation cases draw X_j ~ N(0,1) truncated to [-10, 10],
// S ~ Bernoulli(X1^2 / (2 X1^2 + X2^2)), A uniform on {-1,+1} and
// R = g(X, S, L) * A + N(0,1). Cases 1-2 have p=3 and L = 0; cases 3-4 have
// p=30 and L ~ Bernoulli(1 / (1 + exp(1 - 2 X3 + X4 - 2 X5^2 - S))).
//
//   case 1: g = (|x1 - x2| + 0.5) sign(x1 - x2) + s
//   case 2: g = (s (x1 - x2)^2 + 0.5) sign(x1 - x2^2) + s
//   case 3: g = x1 - x2^2 + sin(x3 x4) + ln(|x5| + 0.1) - 2 s + l
//   case 4: g = x1 x2 + exp(x3) + |x4| + x5 + 2 s + l
//
// The true CATE is 2 g, with sign(0) = 0.

inline constexpr double kTruncation = 10.0;

std::size_t case_dimension(int case_id);
Dataset generate(int case_id, std::size_t n, std::uint64_t seed);
double oracle_cate(int case_id, std::span<const double> x, int s, int l);
CateOracle case_oracle(int case_id);

/// Toy DGP where the CATE depends on S but the optimal rule does not:
/// X1, X2 ~ N(0,1), S ~ Bernoulli(0.5), R = {(S+1) sign(X1-X2) + S} A + e.
Dataset generate_s_invariant_toy(std::size_t n, std::uint64_t seed);
double s_invariant_toy_cate(std::span<const double> x, int s);

/// Synthetic stand-in for a randomized health-insurance lottery: 24
/// covariates, S = English-language materials, L in {1,2,3} from income
/// relative to the poverty line, R = negative medical debt.
Dataset generate_insurance_like(std::size_t n, std::uint64_t seed);

/// Deterministic per-replication seed stream (splitmix64 of master and index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// --- replication harness ----------------------------------------------------

struct ScenarioSpec {
  int case_id = 1;
  std::size_t n = 2000;
  std::size_t n_test = 1000;
  int replications = 200;
  double epsilon = 0.0;
  FairnessMode mode = FairnessMode::kDp;
  std::uint64_t seed = 20240101;
  RegressorSpec reg_spec;
  SolverConfig solver;

  /// Throws ConfigError on invalid values; returns warnings for a
  /// case/mode pairing other than (1|2, dp) or (3|4, cdp).
  std::vector<std::string> validate() const;
};

/// Flat `key = value` lines; `#` starts a comment. Keys: case, n, n_test,
/// replications, epsilon, mode, seed, regressor.{kind,width,depth,epochs,
/// learning_rate,batch_size,output_clip,ridge_lambda,basis_degree},
/// solver.{bandwidth,K,bracket_growth,max_bracket_doublings,tol_g,tol_omega,
/// max_iter,constraint_scale}. `auto` resets an optional value.
ScenarioSpec parse_scenario(std::istream& in, ScenarioSpec base = {});
ScenarioSpec load_scenario(const std::filesystem::path& path, ScenarioSpec base = {});
/// Applies one key/value pair; used by the parser and by CLI overrides.
void set_scenario_key(ScenarioSpec& spec, const std::string& key, const std::string& value);

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;
};

MetricSummary summarize(std::span<const double> values);

struct ReplicationSummary {
  int case_id = 0;
  std::string method;
  double epsilon = 0.0;
  std::size_t n = 0;
  MetricSummary uf;
  MetricSummary cuf;
  MetricSummary pv;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  std::vector<std::string> failures;
  /// Successful replications, ordered by replication index.
  std::vector<ResultRow> rows;
};

/// Method label used in result tables ("dp-idr" / "cdp-idr").
std::string method_name(FairnessMode mode);

/// One fresh train/val/test draw per replication, CATE fitted once and
/// shared by every epsilon (paired comparison). `epsilons` must be sorted
/// ascending. `jobs` threads run replications concurrently; results do not
/// depend on `jobs`.
std::vector<ReplicationSummary> epsilon_sweep(const ScenarioSpec& spec,
                                              std::span<const double> epsilons, int jobs = 1);
ReplicationSummary run_scenario(const ScenarioSpec& spec, int jobs = 1);

/// Group labels appearing in any row, for the per-group CSV columns.
std::vector<int> result_group_labels(std::span<const ReplicationSummary> summaries);
void write_replication_csv(std::ostream& out, std::span<const ReplicationSummary> summaries);
/// Columns: case,method,epsilon,n,metric,mean,sd,n_ok.
void write_summary_csv(std::ostream& out, std::span<const ReplicationSummary> summaries);

}  // namespace fairidr

#endif  // FAIRIDR_SIMGEN_HPP_
