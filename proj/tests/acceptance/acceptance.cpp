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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Thresholds are fixed; --only and --jobs change which
// criteria run and how many replications run concurrently, nothing else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairidr/error.hpp"
#include "fairidr/serialize.hpp"
#include "fairidr/simgen.hpp"
#include "test_support.hpp"

namespace fairidr {
namespace {

using testing::g_oracle;
using testing::identity_cate;
using testing::random_groups;
using testing::row;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::string mean_sd(const MetricSummary& m) { return fmt(m.mean) + " (" + fmt(m.sd) + ")"; }

bool all_ok(const ReplicationSummary& s) { return s.n_failed == 0 && s.n_ok > 0; }

ScenarioSpec scenario(int case_id, FairnessMode mode, std::size_t n) {
  ScenarioSpec spec;
  spec.case_id = case_id;
  spec.mode = mode;
  spec.n = n;
  spec.replications = 50;
  return spec;
}

// Simulation sweeps shared between criteria; each is computed on first use.
class SharedRuns {
 public:
  explicit SharedRuns(int jobs) : jobs_(jobs) {}

  const std::vector<ReplicationSummary>& case1_n2000() {
    if (case1_.empty()) {
      const std::vector<double> eps{0.0, 0.02, 0.04, 0.08, 0.10, 0.15};
      case1_ = epsilon_sweep(scenario(1, FairnessMode::kDp, 2000), eps, jobs_);
    }
    return case1_;
  }

  const std::vector<ReplicationSummary>& case4_n2000() {
    if (case4_.empty()) {
      const std::vector<double> eps{0.0, 0.05, 0.10, 0.15, 0.20, 0.25};
      case4_ = epsilon_sweep(scenario(4, FairnessMode::kCdp, 2000), eps, jobs_);
    }
    return case4_;
  }

  int jobs() const { return jobs_; }

 private:
  int jobs_;
  std::vector<ReplicationSummary> case1_;
  std::vector<ReplicationSummary> case4_;
};

Outcome criterion_table1(SharedRuns& runs) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<ReplicationSummary> by_n;
  for (std::size_t n : {500, 1000}) {
    by_n.push_back(run_scenario(scenario(1, FairnessMode::kDp, n), runs.jobs()));
  }
  by_n.push_back(runs.case1_n2000().front());
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  bool pass = true;
  std::string detail;
  for (std::size_t k = 0; k < by_n.size(); ++k) {
    const auto& s = by_n[k];
    pass = pass && all_ok(s) && s.uf.mean <= 0.07;
    if (k > 0) {
      const auto& prev = by_n[k - 1];
      pass = pass && s.uf.mean <= prev.uf.mean + std::max(prev.uf.sd, s.uf.sd);
    }
    detail += "n=" + std::to_string(s.n) + " UF " + mean_sd(s.uf) + "; ";
  }
  const auto& last = by_n.back();
  pass = pass && last.pv.mean >= 1.75 && last.pv.mean <= 2.00;
  if (runs.jobs() == 1) pass = pass && seconds < 900.0;
  detail += "PV@2000 " + mean_sd(last.pv) + "; " + fmt(seconds, 3) + " s";
  return {pass, detail};
}

Outcome criterion_table3(SharedRuns& runs) {
  const auto& sweep = runs.case1_n2000();
  bool pass = true;
  std::string detail;
  for (std::size_t k = 1; k < sweep.size(); ++k) {
    const auto& s = sweep[k];
    pass = pass && all_ok(s) && s.uf.mean <= s.epsilon + 0.04;
    if (k > 1) pass = pass && s.pv.mean >= sweep[k - 1].pv.mean;
    detail += "eps=" + fmt(s.epsilon) + " UF " + fmt(s.uf.mean) + " PV " + fmt(s.pv.mean) + "; ";
  }
  return {pass, detail};
}

Outcome criterion_table4(SharedRuns& runs) {
  const auto& s = runs.case4_n2000().front();
  const bool pass = all_ok(s) && s.cuf.mean <= 0.08 && s.pv.mean >= 1.7;
  return {pass, "CUF " + mean_sd(s.cuf) + "; PV " + mean_sd(s.pv)};
}

Outcome criterion_table5(SharedRuns& runs) {
  const auto& sweep = runs.case4_n2000();
  bool pass = true;
  std::string detail;
  for (std::size_t k = 1; k < sweep.size(); ++k) {
    const auto& s = sweep[k];
    pass = pass && all_ok(s) && s.cuf.mean <= s.epsilon + 0.04;
    detail += "eps=" + fmt(s.epsilon) + " CUF " + mean_sd(s.cuf) + "; ";
  }
  return {pass, detail};
}

Outcome criterion_grid_oracle() {
  std::mt19937_64 rng(5001);
  std::uniform_int_distribution<std::size_t> sizes(40, 200);
  const CateModel cate = identity_cate(1);
  constexpr double kH = 0.5;
  int roots = 0;
  int interior = 0;
  double worst = 0.0;
  bool pass = true;
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset ds = random_groups(rng, sizes(rng), 1 + trial % 3, 3.0);
    const GroupStats stats = estimate_group_stats(ds);
    SolverConfig cfg;
    cfg.epsilon = 0.02;
    cfg.bracket = 2.0;
    cfg.bandwidth = kH;
    for (int l : stats.labels()) {
      const auto out = solve_omega(ds, cate, stats, l, cfg);
      if (out.diagnostics.solve_case == SolveCase::kInterior) {
        ++interior;
        pass = pass && out.omega == 0.0;
        continue;
      }
      ++roots;
      const double k = out.diagnostics.bracket;
      const double target = out.diagnostics.target;
      double best = 0.0;
      double best_gap = std::numeric_limits<double>::infinity();
      const auto steps = static_cast<long>(std::floor(2.0 * k / 1e-4));
      for (long i = 0; i <= steps; ++i) {
        const double w = -k + 1e-4 * static_cast<double>(i);
        const double gap = std::abs(g_oracle(ds, l, w, kH) - target);
        if (gap < best_gap) {
          best_gap = gap;
          best = w;
        }
      }
      worst = std::max(worst, std::abs(out.omega - best));
    }
  }
  pass = pass && worst <= 2e-4 && roots >= 25;
  return {pass, std::to_string(roots) + " roots, " + std::to_string(interior) +
                    " interior; max |omega - grid| " + fmt(worst, 3)};
}

Outcome criterion_monotone() {
  std::mt19937_64 rng(5002);
  std::uniform_int_distribution<std::size_t> sizes(30, 200);
  std::uniform_real_distribution<double> bandwidths(0.05, 2.0);
  std::uniform_real_distribution<double> omegas(-5.0, 5.0);
  const CateModel cate = identity_cate(1);
  const double tol_g = SolverConfig{}.tol_g;
  long pairs = 0;
  long violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset ds = random_groups(rng, sizes(rng), 1 + trial % 3, 2.0);
    const GroupStats stats = estimate_group_stats(ds);
    const double h = bandwidths(rng);
    for (int l : stats.labels()) {
      for (int k = 0; k < 20; ++k) {
        double lo = omegas(rng);
        double hi = omegas(rng);
        if (lo > hi) std::swap(lo, hi);
        ++pairs;
        if (g_hat(ds, cate, stats, l, hi, h) > g_hat(ds, cate, stats, l, lo, h) + tol_g) {
          ++violations;
        }
      }
    }
  }
  return {violations == 0,
          std::to_string(pairs) + " ordered pairs, " + std::to_string(violations) + " violations"};
}

Outcome criterion_three_cases() {
  const CateModel cate = identity_cate(1);
  SolverConfig cfg;
  cfg.epsilon = 0.05;
  cfg.bandwidth = 0.5;
  std::vector<Sample> base;
  for (int i = 0; i < 40; ++i) base.push_back(row({-1.0 + 0.05 * i}, i % 2, 0, 1, 0));

  bool pass = true;
  std::string detail;
  const std::vector<std::pair<double, SolveCase>> cases{
      {0.0, SolveCase::kInterior}, {1.0, SolveCase::kUpper}, {-1.0, SolveCase::kLower}};
  for (const auto& [shift, expected] : cases) {
    std::vector<Sample> rows = base;
    for (auto& smp : rows) smp.x[0] += smp.s * shift;
    const Dataset ds(rows, 1);
    const auto out = solve_omega(ds, cate, estimate_group_stats(ds), 0, cfg);
    const auto& d = out.diagnostics;
    pass = pass && d.solve_case == expected;
    double residual = 0.0;
    if (expected == SolveCase::kInterior) {
      pass = pass && out.omega == 0.0;
    } else {
      const double target = expected == SolveCase::kUpper ? 0.05 : -0.05;
      residual = std::abs(g_oracle(ds, 0, out.omega, 0.5) - target);
      pass = pass && d.target == target && residual <= 1e-6 && d.residual <= 1e-6;
      pass = pass && (expected == SolveCase::kUpper ? out.omega > 0.0 : out.omega < 0.0);
    }
    detail += to_string(d.solve_case) + " omega=" + fmt(out.omega, 6) + " residual=" +
              fmt(residual, 2) + "; ";
  }
  return {pass, detail};
}

Outcome criterion_dp_is_cdp() {
  long compared = 0;
  long mismatches = 0;
  for (int k = 0; k < 3; ++k) {
    const Dataset sample = generate(1 + k % 2, 1500, 6000 + k);
    const DatasetSplit parts = split(sample, {0.6, 0.2, 6100 + static_cast<std::uint64_t>(k)});
    RegressorSpec reg;
    reg.seed = 6200 + k;
    const CateModel cate = fit_cate(parts.train, parts.val, reg);
    for (double eps : {0.0, 0.03, 0.1}) {
      SolverConfig cfg;
      cfg.epsilon = eps;
      const FairRule dp = fit_fair_rule(parts.train, cate, cfg, FairnessMode::kDp);
      const FairRule cdp = fit_fair_rule(parts.train, cate, cfg, FairnessMode::kCdp);
      const Decisions a = apply_rule(dp, parts.test);
      const Decisions b = apply_rule(cdp, parts.test);
      const auto sa = dp.scores(parts.test);
      const auto sb = cdp.scores(parts.test);
      for (std::size_t i = 0; i < a.size(); ++i) {
        ++compared;
        if (a[i] != b[i] || sa[i] != sb[i]) ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(compared) + " decisions, " +
                               std::to_string(mismatches) + " differ"};
}

Outcome criterion_value_identity() {
  std::mt19937_64 rng(7001);
  std::uniform_real_distribution<double> eps(0.0, 0.2);
  double worst_ratio = 0.0;
  bool pass = true;
  for (int k = 0; k < 20; ++k) {
    const int case_id = 1 + k % 4;
    const Dataset sample = generate(case_id, 600 + 40 * static_cast<std::size_t>(k), rng());
    const DatasetSplit parts = split(sample, {0.6, 0.2, rng()});
    RegressorSpec reg;
    reg.kind = k % 2 == 0 ? RegressorKind::kReluNet : RegressorKind::kRidgeBasis;
    reg.basis_degree = 2;
    reg.seed = rng();
    SolverConfig cfg;
    cfg.epsilon = eps(rng);
    const FairnessMode mode = case_id <= 2 ? FairnessMode::kDp : FairnessMode::kCdp;
    const FairRule rule = fit_fair_rule(parts.train, parts.val, reg, cfg, mode);
    const auto check = value_identity_check(parts.test, rule);
    const double n = static_cast<double>(parts.test.size());
    pass = pass && check.gap <= 1e-10 * n;
    worst_ratio = std::max(worst_ratio, check.gap / n);
  }
  return {pass, "20 rules; max gap/n " + fmt(worst_ratio, 3)};
}

Outcome criterion_s_invariant_toy() {
  const Dataset ds = generate_s_invariant_toy(100000, 8001);
  Decisions d(ds.size());
  double cate_s1 = 0.0;
  double cate_s0 = 0.0;
  double n1 = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    d[i] = ds[i].x[0] - ds[i].x[1] > 0.0 ? 1 : -1;
    const double c = s_invariant_toy_cate(ds[i].x, ds[i].s);
    if (ds[i].s == 1) {
      cate_s1 += c;
      n1 += 1.0;
    } else {
      cate_s0 += c;
    }
  }
  const double uf = unfairness(d, ds);
  const double gap = cate_s1 / n1 - cate_s0 / (static_cast<double>(ds.size()) - n1);
  return {uf <= 0.02, "UF " + fmt(uf, 3) + "; mean CATE gap across S " + fmt(gap, 3)};
}

Outcome criterion_gradient() {
  std::mt19937_64 rng(9001);
  std::normal_distribution<double> normal;
  constexpr double kStep = 1e-5;
  double worst = 0.0;
  long checked = 0;
  long kinks = 0;
  for (int trial = 0; trial < 3; ++trial) {
    const int q = 5;
    const RegressorSpec defaults;
    ReluNetwork net(q, defaults.width, defaults.depth, rng());
    Eigen::MatrixXd x(q, 32);
    Eigen::RowVectorXd y(32);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = normal(rng);
    std::vector<double> grad;
    const double f0 = net.loss(x, y, &grad);
    auto params = net.parameters();
    for (std::size_t k = 0; k < params.size(); ++k) {
      const double keep = params[k];
      params[k] = keep + kStep;
      net.set_parameters(params);
      const double up = net.loss(x, y);
      params[k] = keep - kStep;
      net.set_parameters(params);
      const double down = net.loss(x, y);
      params[k] = keep;
      // A ReLU switching inside [-step, step] shows up as unequal one-sided slopes.
      const double fwd = (up - f0) / kStep;
      const double bwd = (f0 - down) / kStep;
      if (std::abs(fwd - bwd) > 1e-3 * std::max({std::abs(fwd), std::abs(bwd), 1e-6})) {
        ++kinks;
        continue;
      }
      const double numeric = (up - down) / (2.0 * kStep);
      worst = std::max(worst, std::abs(numeric - grad[k]) /
                                  std::max({std::abs(numeric), std::abs(grad[k]), 1e-6}));
      ++checked;
    }
    net.set_parameters(params);
  }
  const bool pass = worst <= 1e-4 && kinks * 100 <= checked;
  return {pass, std::to_string(checked) + " parameters, " + std::to_string(kinks) +
                    " at kinks; max relative error " + fmt(worst, 3)};
}

Outcome criterion_insurance() {
  const testing::TempDir dir;
  save_csv(generate_insurance_like(7000, 10001), dir / "insurance.csv");
  const Dataset data = load_csv(dir / "insurance.csv", {});
  const std::vector<double> eps{0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  std::vector<std::vector<double>> cuf(eps.size());
  for (std::uint64_t k = 0; k < 5; ++k) {
    const DatasetSplit parts = split(data, {0.72, 0.08, derive_seed(10002, k)});
    RegressorSpec reg;
    reg.seed = derive_seed(10003, k);
    const CateModel cate = fit_cate(parts.train, parts.val, reg);
    for (std::size_t e = 0; e < eps.size(); ++e) {
      SolverConfig cfg;
      cfg.epsilon = eps[e];
      save_rule(fit_fair_rule(parts.train, cate, cfg, FairnessMode::kCdp), dir / "rule.json");
      const FairRule rule = load_rule(dir / "rule.json");
      cuf[e].push_back(conditional_unfairness(apply_rule(rule, parts.test), parts.test).cuf);
    }
  }
  bool pass = data.size() == 7000 && data.p() == 24;
  std::string detail;
  MetricSummary prev;
  for (std::size_t e = 0; e < eps.size(); ++e) {
    const MetricSummary s = summarize(cuf[e]);
    if (e > 0) pass = pass && s.mean >= prev.mean - std::max(prev.sd, s.sd);
    detail += "eps=" + fmt(eps[e]) + " CUF " + mean_sd(s) + "; ";
    prev = s;
  }
  return {pass, detail};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

int run(int argc, char** argv) {
  CLI::App app{"fairidr acceptance suite"};
  int jobs = 1;
  std::vector<int> only;
  app.add_option("--jobs,-j", jobs, "concurrent replications")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "criterion numbers to run")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  SharedRuns runs(jobs);
  const std::vector<Criterion> criteria{
      {1, "case1-dp-trend", [&] { return criterion_table1(runs); }},
      {2, "case1-epsilon-control", [&] { return criterion_table3(runs); }},
      {3, "case4-cdp-trend", [&] { return criterion_table4(runs); }},
      {4, "case4-epsilon-control", [&] { return criterion_table5(runs); }},
      {5, "solver-grid-oracle", criterion_grid_oracle},
      {6, "constraint-monotone", criterion_monotone},
      {7, "three-case-rule", criterion_three_cases},
      {8, "dp-equals-constant-cdp", criterion_dp_is_cdp},
      {9, "value-identity", criterion_value_identity},
      {10, "s-invariant-oracle-fair", criterion_s_invariant_toy},
      {11, "relu-gradient", criterion_gradient},
      {12, "insurance-like-pipeline", criterion_insurance},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) {
      std::printf("SKIP %2d %s\n", c.id, c.name);
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += out.pass ? 0 : 1;
    std::printf("%s %2d %s: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d failed\n", failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace fairidr

int main(int argc, char** argv) { return fairidr::run(argc, argv); }
