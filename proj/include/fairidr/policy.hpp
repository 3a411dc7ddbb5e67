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

#ifndef FAIRIDR_POLICY_HPP_
#define FAIRIDR_POLICY_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fairidr/cate.hpp"
#include "fairidr/dataset.hpp"
#include "fairidr/fairness.hpp"

namespace fairidr {

/// One treatment recommendation in {-1, +1} per evaluation row.
using Decisions = std::vector<int>;

/// 2 I(score > 0) - 1 elementwise.
Decisions decisions_from_scores(std::span<const double> scores);
Decisions apply_rule(const FairRule& rule, const Dataset& ds);

/// |P(D=+1 | S=1) - P(D=+1 | S=0)|; UndefinedMetricError when an S value is
/// absent.
double unfairness(const Decisions& decisions, const Dataset& test);

struct ConditionalUnfairness {
  double cuf = 0.0;
  std::map<int, double> per_group;
  /// Groups lacking one S value in `test`; left out of the mean.
  std::vector<int> excluded;
};

ConditionalUnfairness conditional_unfairness(const Decisions& decisions, const Dataset& test);

using CateOracle = std::function<double(const Sample&)>;

/// (1/N) sum_j oracle(z_j) I(D_j = +1).
double policy_value_true(const Decisions& decisions, const Dataset& test, const CateOracle& oracle);
/// Same, with delta estimated by an independently fitted CATE model.
double policy_value_estimated(const Decisions& decisions, const Dataset& test,
                              const CateModel& cate);

struct ValueIdentity {
  double lhs = 0.0;  // 2 V(D) - mean(m1 + m0)
  double rhs = 0.0;  // mean(delta * D)
  double gap = 0.0;
};

/// Plug-in check of 2V(D) - E[m1 + m0] = E[delta D] with the rule's own
/// regressors.
ValueIdentity value_identity_check(const Dataset& ds, const FairRule& rule);
ValueIdentity value_identity_check(const Dataset& ds, const CateModel& cate,
                                   const Decisions& decisions);

struct MetricsReport {
  double uf = 0.0;
  double cuf = 0.0;
  std::map<int, double> per_group_uf;
  std::vector<int> excluded_groups;
  double pv = 0.0;
  std::size_t n_test = 0;
};

/// UF, CUF and the given policy value for one set of decisions.
MetricsReport evaluate_decisions(const Decisions& decisions, const Dataset& test, double pv);

/// One row of the per-replication results table.
struct ResultRow {
  int case_id = 0;
  std::string method;
  double epsilon = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  MetricsReport metrics;
};

/// Six-significant-digit decimal, as used in every results CSV.
std::string format_metric(double v);

/// Header "case,method,epsilon,n,seed,uf,cuf,pv,uf_l<label>...".
void write_result_header(std::ostream& out, std::span<const int> group_labels);
/// Groups missing from the row's report are written as empty cells.
void write_result_row(std::ostream& out, const ResultRow& row, std::span<const int> group_labels);

}  // namespace fairidr

#endif  // FAIRIDR_POLICY_HPP_
