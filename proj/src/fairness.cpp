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

#include "fairidr/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairidr/error.hpp"
#include "fairidr/kernels.hpp"

namespace fairidr {

// ---------------------------------------------------------------------------
// Group statistics

GroupStats::GroupStats(std::map<int, GroupStat> groups, std::size_t n_total)
    : groups_(std::move(groups)), n_total_(n_total) {}

const GroupStat& GroupStats::at(int l) const {
  auto it = groups_.find(l);
  if (it == groups_.end()) {
    throw UnknownGroupError("unknown legitimate group l=" + std::to_string(l));
  }
  return it->second;
}

double GroupStats::psi(int l, int s) const {
  const GroupStat& g = at(l);
  return s == 1 ? 1.0 / g.pi1 : -1.0 / g.pi0;
}

std::vector<int> GroupStats::labels() const {
  std::vector<int> out;
  for (const auto& [l, _] : groups_) out.push_back(l);
  return out;
}

GroupStats estimate_group_stats(const Dataset& ds) {
  if (ds.empty()) throw ValidationError("cannot estimate group statistics on an empty dataset");
  std::map<int, GroupStat> groups;
  for (const auto& [l, count] : group_counts(ds)) {
    if (count.n_s1 == 0 || count.n_s0 == 0) {
      throw DegenerateGroupError("group l=" + std::to_string(l) + " has no rows with S=" +
                                 (count.n_s1 == 0 ? "1" : "0"));
    }
    GroupStat g;
    g.n = count.n;
    g.n_s1 = count.n_s1;
    g.pi1 = static_cast<double>(count.n_s1) / static_cast<double>(count.n);
    g.pi0 = static_cast<double>(count.n_s0) / static_cast<double>(count.n);
    groups.emplace(l, g);
  }
  return GroupStats(std::move(groups), ds.size());
}

double psi(const GroupStats& stats, int l, int s) { return stats.psi(l, s); }

// ---------------------------------------------------------------------------
// Enum names

std::string to_string(ConstraintScale scale) {
  return scale == ConstraintScale::kGroup ? "group" : "sample";
}

ConstraintScale constraint_scale_from_string(const std::string& name) {
  if (name == "group") return ConstraintScale::kGroup;
  if (name == "sample") return ConstraintScale::kSample;
  throw ConfigError("unknown constraint scale '" + name + "' (expected group|sample)");
}

std::string to_string(SolveCase c) {
  switch (c) {
    case SolveCase::kInterior: return "interior";
    case SolveCase::kUpper: return "upper";
    case SolveCase::kLower: return "lower";
  }
  return "?";
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::kInterior: return "interior";
    case StopReason::kResidual: return "tol_g";
    case StopReason::kBracketWidth: return "tol_omega";
    case StopReason::kMaxIter: return "max_iter";
  }
  return "?";
}

SolveCase solve_case_from_string(const std::string& name) {
  for (auto c : {SolveCase::kInterior, SolveCase::kUpper, SolveCase::kLower}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown solve case '" + name + "'");
}

StopReason stop_reason_from_string(const std::string& name) {
  for (auto r : {StopReason::kInterior, StopReason::kResidual, StopReason::kBracketWidth,
                 StopReason::kMaxIter}) {
    if (to_string(r) == name) return r;
  }
  throw ConfigError("unknown stop reason '" + name + "'");
}

std::string to_string(FairnessMode mode) { return mode == FairnessMode::kDp ? "dp" : "cdp"; }

FairnessMode fairness_mode_from_string(const std::string& name) {
  if (name == "dp") return FairnessMode::kDp;
  if (name == "cdp") return FairnessMode::kCdp;
  throw ConfigError("unknown mode '" + name + "' (expected dp|cdp)");
}

void SolverConfig::validate() const {
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (bandwidth && !(*bandwidth > 0.0)) throw ConfigError("bandwidth must be > 0");
  if (bracket && !(*bracket > 0.0)) throw ConfigError("K must be > 0");
  if (!(bracket_growth > 1.0)) throw ConfigError("bracket_growth must be > 1");
  if (max_bracket_doublings < 0) throw ConfigError("max_bracket_doublings must be >= 0");
  if (tol_omega && !(*tol_omega > 0.0)) throw ConfigError("tol_omega must be > 0");
  if (!(tol_g > 0.0)) throw ConfigError("tol_g must be > 0");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
}

// ---------------------------------------------------------------------------
// Constraint evaluation

GroupConstraint::GroupConstraint(int label, std::size_t n_total, std::vector<double> psi,
                                 std::vector<double> delta)
    : label_(label), n_total_(n_total), psi_(std::move(psi)), delta_(std::move(delta)) {
  if (psi_.size() != delta_.size()) throw ShapeError("psi/delta length mismatch");
  if (n_total_ == 0) throw ValidationError("constraint over an empty sample");
}

GroupConstraint GroupConstraint::build(const Dataset& ds, std::span<const double> delta,
                                       const GroupStats& stats, int l) {
  if (delta.size() != ds.size()) throw ShapeError("delta is not aligned with the dataset");
  const GroupStat& g = stats.at(l);
  std::vector<double> psi_rows;
  std::vector<double> delta_rows;
  psi_rows.reserve(g.n);
  delta_rows.reserve(g.n);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds[i].l != l) continue;
    psi_rows.push_back(ds[i].s == 1 ? 1.0 / g.pi1 : -1.0 / g.pi0);
    delta_rows.push_back(delta[i]);
  }
  return GroupConstraint(l, ds.size(), std::move(psi_rows), std::move(delta_rows));
}

double GroupConstraint::smoothed(double omega, double h) const {
  return kernels::smoothed_constraint(psi_, delta_, omega, h, n_total_);
}

double GroupConstraint::indicator(double omega) const {
  return kernels::indicator_constraint(psi_, delta_, omega, n_total_);
}

double g_hat(const Dataset& ds, const CateModel& cate, const GroupStats& stats, int l,
             double omega, double h) {
  if (!(h > 0.0)) throw ConfigError("bandwidth h must be > 0");
  const auto delta = cate.predict(ds);
  return GroupConstraint::build(ds, delta, stats, l).smoothed(omega, h);
}

double g_indicator(const Dataset& ds, const CateModel& cate, const GroupStats& stats, int l) {
  const auto delta = cate.predict(ds);
  return GroupConstraint::build(ds, delta, stats, l).indicator(0.0);
}

// ---------------------------------------------------------------------------
// Root finding

namespace {

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(8);
  os << v;
  return os.str();
}

}  // namespace

ResolvedSolver resolve_solver(const SolverConfig& cfg, double delta_sd, std::size_t n,
                              const GroupStat& group) {
  const double scale = delta_sd > 1e-12 ? delta_sd : 1.0;
  ResolvedSolver out;
  out.h = cfg.bandwidth.value_or(scale * std::pow(static_cast<double>(std::max<std::size_t>(n, 1)),
                                                  -1.0 / 6.0));
  out.bracket = cfg.bracket.value_or(10.0 * scale * std::max(1.0 / group.pi1, 1.0 / group.pi0));
  out.tol_omega = cfg.tol_omega.value_or(1e-10 * out.bracket);
  return out;
}

SolveResult solve_omega(const GroupConstraint& group, const GroupStat& stat,
                        const SolverConfig& cfg, const ResolvedSolver& numerics) {
  cfg.validate();
  SolveResult result;
  SolveDiagnostics& diag = result.diagnostics;

  const double share =
      static_cast<double>(stat.n) / static_cast<double>(group.n_total());
  const double eps = cfg.scale == ConstraintScale::kGroup ? cfg.epsilon * share : cfg.epsilon;

  diag.indicator_at_zero = group.indicator(0.0);
  diag.bracket = numerics.bracket;
  if (std::abs(diag.indicator_at_zero) <= eps) {
    diag.solve_case = SolveCase::kInterior;
    diag.stop = StopReason::kInterior;
    diag.residual = 0.0;
    return result;
  }
  diag.solve_case = diag.indicator_at_zero > eps ? SolveCase::kUpper : SolveCase::kLower;
  const double target = diag.solve_case == SolveCase::kUpper ? eps : -eps;
  diag.target = target;

  const double h = numerics.h;
  auto g = [&](double omega) { return group.smoothed(omega, h); };
  auto check_order = [&](double a, double ga, double b, double gb) {
    if (ga < gb - cfg.tol_g) {
      throw MonotonicityError("group l=" + std::to_string(group.label()) + ": G(" + fmt(a) +
                              ")=" + fmt(ga) + " < G(" + fmt(b) + ")=" + fmt(gb));
    }
  };

  double k = numerics.bracket;
  double lo = -k;
  double hi = k;
  double g_lo = g(lo);
  double g_hi = g(hi);
  check_order(lo, g_lo, hi, g_hi);
  while (!(g_lo >= target && g_hi <= target)) {
    if (diag.doublings >= cfg.max_bracket_doublings) {
      throw NoRootError("group l=" + std::to_string(group.label()) + ": target " + fmt(target) +
                        " not bracketed on [-" + fmt(k) + ", " + fmt(k) + "]; G(-K)=" +
                        fmt(g_lo) + ", G(K)=" + fmt(g_hi));
    }
    k *= cfg.bracket_growth;
    ++diag.doublings;
    lo = -k;
    hi = k;
    g_lo = g(lo);
    g_hi = g(hi);
    check_order(lo, g_lo, hi, g_hi);
  }
  diag.bracket = k;

  double omega = 0.5 * (lo + hi);
  while (true) {
    omega = 0.5 * (lo + hi);
    const double g_mid = g(omega);
    ++diag.iterations;
    check_order(lo, g_lo, omega, g_mid);
    check_order(omega, g_mid, hi, g_hi);
    if (std::abs(g_mid - target) <= cfg.tol_g) {
      diag.stop = StopReason::kResidual;
      break;
    }
    if (g_mid > target) {
      lo = omega;
      g_lo = g_mid;
    } else {
      hi = omega;
      g_hi = g_mid;
    }
    if (hi - lo <= numerics.tol_omega) {
      omega = 0.5 * (lo + hi);
      diag.stop = StopReason::kBracketWidth;
      break;
    }
    if (diag.iterations >= cfg.max_iter) {
      omega = 0.5 * (lo + hi);
      diag.stop = StopReason::kMaxIter;
      break;
    }
  }
  result.omega = omega;
  diag.residual = std::abs(g(omega) - target);
  return result;
}

SolveResult solve_omega(const Dataset& ds, const CateModel& cate, const GroupStats& stats, int l,
                        const SolverConfig& cfg) {
  const auto delta = cate.predict(ds);
  const auto group = GroupConstraint::build(ds, delta, stats, l);
  const auto numerics = resolve_solver(cfg, sample_sd(delta), ds.size(), stats.at(l));
  return solve_omega(group, stats.at(l), cfg, numerics);
}

// ---------------------------------------------------------------------------
// FairRule

FairRule::FairRule(CateModel cate, GroupStats groups, std::map<int, double> omegas,
                   std::map<int, SolveDiagnostics> diagnostics, SolverConfig config,
                   FairnessMode mode, double bandwidth)
    : cate_(std::move(cate)),
      groups_(std::move(groups)),
      omegas_(std::move(omegas)),
      diagnostics_(std::move(diagnostics)),
      config_(std::move(config)),
      mode_(mode),
      bandwidth_(bandwidth) {
  for (int l : groups_.labels()) {
    if (!omegas_.contains(l)) {
      throw ValidationError("no multiplier for group l=" + std::to_string(l));
    }
  }
}

double FairRule::omega(int l) const {
  auto it = omegas_.find(fairness_group(l));
  if (it == omegas_.end()) {
    throw UnknownGroupError("rule has no multiplier for group l=" + std::to_string(l));
  }
  return it->second;
}

double FairRule::score(std::span<const double> x, int s, int l) const {
  if (s != 0 && s != 1) throw ValidationError("s must be 0 or 1");
  const double w = omega(l);
  return cate_.predict(x, s, l) - w * groups_.psi(fairness_group(l), s);
}

int FairRule::decide(std::span<const double> x, int s, int l) const {
  return score(x, s, l) > 0.0 ? 1 : -1;
}

std::vector<double> FairRule::scores(const Dataset& ds) const {
  std::vector<double> out = cate_.predict(ds);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const int g = fairness_group(ds[i].l);
    out[i] -= omega(ds[i].l) * groups_.psi(g, ds[i].s);
  }
  return out;
}

FairRule fit_fair_rule(const Dataset& train, const CateModel& cate, const SolverConfig& cfg,
                       FairnessMode mode) {
  cfg.validate();
  const Dataset grouped = mode == FairnessMode::kDp ? train.with_constant_group(0) : train;
  GroupStats stats = estimate_group_stats(grouped);
  // The CATE sees the real L; only the fairness grouping is collapsed in DP.
  const std::vector<double> delta = cate.predict(train);
  const double sd = sample_sd(delta);

  std::map<int, double> omegas;
  std::map<int, SolveDiagnostics> diagnostics;
  double h = 0.0;
  for (int l : stats.labels()) {
    const auto group = GroupConstraint::build(grouped, delta, stats, l);
    const auto numerics = resolve_solver(cfg, sd, train.size(), stats.at(l));
    h = numerics.h;
    SolveResult solved = solve_omega(group, stats.at(l), cfg, numerics);
    omegas.emplace(l, solved.omega);
    diagnostics.emplace(l, solved.diagnostics);
  }
  return FairRule(cate, std::move(stats), std::move(omegas), std::move(diagnostics), cfg, mode, h);
}

FairRule fit_fair_rule(const Dataset& train, const Dataset& val, const RegressorSpec& reg_spec,
                       const SolverConfig& cfg, FairnessMode mode) {
  cfg.validate();
  // Fail on degenerate groups before paying for the CATE fit.
  estimate_group_stats(mode == FairnessMode::kDp ? train.with_constant_group(0) : train);
  return fit_fair_rule(train, fit_cate(train, val, reg_spec), cfg, mode);
}

}  // namespace fairidr
