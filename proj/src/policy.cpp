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

#include "fairidr/policy.hpp"

#include <cmath>
#include <cstdio>

#include "fairidr/error.hpp"

namespace fairidr {

namespace {

void check_aligned(const Decisions& decisions, const Dataset& test) {
  if (decisions.size() != test.size()) {
    throw ShapeError("decisions (" + std::to_string(decisions.size()) +
                     ") not aligned with evaluation set (" + std::to_string(test.size()) + ")");
  }
}

struct RateCounts {
  std::size_t n1 = 0, pos1 = 0, n0 = 0, pos0 = 0;
  bool defined() const { return n1 > 0 && n0 > 0; }
  double gap() const {
    return std::abs(static_cast<double>(pos1) / static_cast<double>(n1) -
                    static_cast<double>(pos0) / static_cast<double>(n0));
  }
  void add(int s, int d) {
    if (s == 1) {
      ++n1;
      pos1 += d == 1;
    } else {
      ++n0;
      pos0 += d == 1;
    }
  }
};

}  // namespace

Decisions decisions_from_scores(std::span<const double> scores) {
  Decisions out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] > 0.0 ? 1 : -1;
  return out;
}

Decisions apply_rule(const FairRule& rule, const Dataset& ds) {
  return decisions_from_scores(rule.scores(ds));
}

double unfairness(const Decisions& decisions, const Dataset& test) {
  check_aligned(decisions, test);
  RateCounts c;
  for (std::size_t i = 0; i < test.size(); ++i) c.add(test[i].s, decisions[i]);
  if (!c.defined()) {
    throw UndefinedMetricError("unfairness needs both S=0 and S=1 in the evaluation set");
  }
  return c.gap();
}

ConditionalUnfairness conditional_unfairness(const Decisions& decisions, const Dataset& test) {
  check_aligned(decisions, test);
  std::map<int, RateCounts> by_group;
  for (std::size_t i = 0; i < test.size(); ++i) by_group[test[i].l].add(test[i].s, decisions[i]);
  ConditionalUnfairness out;
  double sum = 0.0;
  for (const auto& [l, c] : by_group) {
    if (!c.defined()) {
      out.excluded.push_back(l);
      continue;
    }
    const double uf = c.gap();
    out.per_group.emplace(l, uf);
    sum += uf;
  }
  if (out.per_group.empty()) {
    throw UndefinedMetricError("no group has both S values; conditional unfairness undefined");
  }
  out.cuf = sum / static_cast<double>(out.per_group.size());
  return out;
}

double policy_value_true(const Decisions& decisions, const Dataset& test,
                         const CateOracle& oracle) {
  check_aligned(decisions, test);
  if (test.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (decisions[i] == 1) acc += oracle(test[i]);
  }
  return acc / static_cast<double>(test.size());
}

double policy_value_estimated(const Decisions& decisions, const Dataset& test,
                              const CateModel& cate) {
  check_aligned(decisions, test);
  if (test.empty()) return 0.0;
  const auto delta = cate.predict(test);
  double acc = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (decisions[i] == 1) acc += delta[i];
  }
  return acc / static_cast<double>(test.size());
}

ValueIdentity value_identity_check(const Dataset& ds, const CateModel& cate,
                                   const Decisions& decisions) {
  check_aligned(decisions, ds);
  ValueIdentity out;
  if (ds.empty()) return out;
  const auto [m1, m0] = cate.predict_arms(ds);
  double value = 0.0;
  double baseline = 0.0;
  double contrast = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    value += decisions[i] == 1 ? m1(k) : m0(k);
    baseline += m1(k) + m0(k);
    contrast += (m1(k) - m0(k)) * decisions[i];
  }
  const auto n = static_cast<double>(ds.size());
  out.lhs = 2.0 * value / n - baseline / n;
  out.rhs = contrast / n;
  out.gap = out.lhs - out.rhs;
  return out;
}

ValueIdentity value_identity_check(const Dataset& ds, const FairRule& rule) {
  return value_identity_check(ds, rule.cate(), apply_rule(rule, ds));
}

MetricsReport evaluate_decisions(const Decisions& decisions, const Dataset& test, double pv) {
  MetricsReport report;
  report.uf = unfairness(decisions, test);
  auto cond = conditional_unfairness(decisions, test);
  report.cuf = cond.cuf;
  report.per_group_uf = std::move(cond.per_group);
  report.excluded_groups = std::move(cond.excluded);
  report.pv = pv;
  report.n_test = test.size();
  return report;
}

std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_result_header(std::ostream& out, std::span<const int> group_labels) {
  out << "case,method,epsilon,n,seed,uf,cuf,pv";
  for (int l : group_labels) out << ",uf_l" << l;
  out << '\n';
}

void write_result_row(std::ostream& out, const ResultRow& row, std::span<const int> group_labels) {
  const auto& m = row.metrics;
  out << row.case_id << ',' << row.method << ',' << format_metric(row.epsilon) << ',' << row.n
      << ',' << row.seed << ',' << format_metric(m.uf) << ',' << format_metric(m.cuf) << ','
      << format_metric(m.pv);
  for (int l : group_labels) {
    out << ',';
    auto it = m.per_group_uf.find(l);
    if (it != m.per_group_uf.end()) out << format_metric(it->second);
  }
  out << '\n';
}

}  // namespace fairidr
