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

#ifndef FAIRIDR_FAIRNESS_HPP_
#define FAIRIDR_FAIRNESS_HPP_

// Demographic-parity constrained decision rules.
//
// The unconstrained rule treats z when the estimated CATE delta(z) is
// positive. Within each legitimate group l the rule is perturbed to
//
//   D(z) = +1  iff  delta(z) - omega_l * psi_l(s) > 0,
//   psi_l(s) = I(s=1)/pi(1|l) - I(s=0)/pi(0|l),
//
// where omega_l is chosen so that the group's positive-rate contrast
// G_l(omega) = (1/n) sum_i psi_l(S_i) I(L_i=l) I(D(Z_i)=+1) sits at the
// tolerance boundary. G_l is non-increasing in omega, so omega_l is a
// one-dimensional root found by bisection on a normal-CDF smoothing of G_l.
// DP is the special case of a single constant group.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairidr/cate.hpp"
#include "fairidr/dataset.hpp"

namespace fairidr {

struct GroupStat {
  std::size_t n = 0;
  std::size_t n_s1 = 0;
  double pi1 = 0.0;
  double pi0 = 0.0;
};

/// Empirical P(S=s | L=l) per observed group.
class GroupStats {
 public:
  GroupStats() = default;
  explicit GroupStats(std::map<int, GroupStat> groups, std::size_t n_total);

  const GroupStat& at(int l) const;
  bool contains(int l) const { return groups_.contains(l); }
  /// psi_l(s) = 1/pi1 for s=1 and -1/pi0 for s=0.
  double psi(int l, int s) const;
  std::vector<int> labels() const;
  std::size_t n_total() const { return n_total_; }
  const std::map<int, GroupStat>& groups() const { return groups_; }

 private:
  std::map<int, GroupStat> groups_;
  std::size_t n_total_ = 0;
};

/// Throws DegenerateGroupError for a group in which one S value is absent.
GroupStats estimate_group_stats(const Dataset& ds);
double psi(const GroupStats& stats, int l, int s);

/// How the tolerance enters the per-group root equation.
enum class ConstraintScale {
  /// G_l(omega) = +-epsilon, with G_l normalized by the full sample size n.
  kSample,
  /// G_l(omega) = +-epsilon * N_l / n: the within-group positive-rate gap is
  /// held at epsilon. Identical to kSample when there is one group.
  kGroup,
};

std::string to_string(ConstraintScale scale);
ConstraintScale constraint_scale_from_string(const std::string& name);

struct SolverConfig {
  double epsilon = 0.0;
  /// Smoothing bandwidth; unset means sd(delta) * n^(-1/6).
  std::optional<double> bandwidth;
  /// Initial bracket half-width K; unset means
  /// 10 * sd(delta) * max(1/pi1, 1/pi0) per group.
  std::optional<double> bracket;
  double bracket_growth = 2.0;
  int max_bracket_doublings = 10;
  /// Bracket-width stop; unset means 1e-10 * K.
  std::optional<double> tol_omega;
  double tol_g = 1e-6;
  int max_iter = 200;
  ConstraintScale scale = ConstraintScale::kSample;

  void validate() const;
};

enum class SolveCase { kInterior, kUpper, kLower };
enum class StopReason { kInterior, kResidual, kBracketWidth, kMaxIter };

std::string to_string(SolveCase c);
std::string to_string(StopReason r);
SolveCase solve_case_from_string(const std::string& name);
StopReason stop_reason_from_string(const std::string& name);

struct SolveDiagnostics {
  SolveCase solve_case = SolveCase::kInterior;
  StopReason stop = StopReason::kInterior;
  double indicator_at_zero = 0.0;  // unsmoothed G_l(0)
  double target = 0.0;             // +-epsilon (scaled), 0 when interior
  double residual = 0.0;           // |G_l(omega) - target|
  double bracket = 0.0;            // final K
  int iterations = 0;
  int doublings = 0;
};

struct SolveResult {
  double omega = 0.0;
  SolveDiagnostics diagnostics;
};

/// Precomputed (psi_i, delta_i) for the rows of one group, plus the total
/// row count n used as the normalizer.
class GroupConstraint {
 public:
  GroupConstraint(int label, std::size_t n_total, std::vector<double> psi,
                  std::vector<double> delta);
  /// Rows of `ds` with L=l; `delta` is aligned with `ds`.
  static GroupConstraint build(const Dataset& ds, std::span<const double> delta,
                               const GroupStats& stats, int l);

  /// Smoothed constraint value at omega.
  double smoothed(double omega, double h) const;
  /// Unsmoothed value at omega (indicator of a strictly positive score).
  double indicator(double omega = 0.0) const;

  int label() const { return label_; }
  std::size_t n_total() const { return n_total_; }
  std::size_t n_group() const { return psi_.size(); }
  std::span<const double> psi() const { return psi_; }
  std::span<const double> delta() const { return delta_; }

 private:
  int label_;
  std::size_t n_total_;
  std::vector<double> psi_;
  std::vector<double> delta_;
};

double g_hat(const Dataset& ds, const CateModel& cate, const GroupStats& stats, int l,
             double omega, double h);
double g_indicator(const Dataset& ds, const CateModel& cate, const GroupStats& stats, int l);

/// Solver numerics after resolving the "auto" defaults against the data.
struct ResolvedSolver {
  double h = 0.0;
  double bracket = 0.0;
  double tol_omega = 0.0;
};

/// `delta_sd` is the sample SD of delta over the fitting rows; `n` their
/// count. A zero SD falls back to a unit scale.
ResolvedSolver resolve_solver(const SolverConfig& cfg, double delta_sd, std::size_t n,
                              const GroupStat& group);

/// Three-case multiplier rule: omega = 0 when |G_l(0)| <= eps, else the root
/// of the smoothed G_l at +eps (G_l(0) > eps) or -eps (G_l(0) < -eps).
SolveResult solve_omega(const GroupConstraint& group, const GroupStat& stat,
                        const SolverConfig& cfg, const ResolvedSolver& numerics);
SolveResult solve_omega(const Dataset& ds, const CateModel& cate, const GroupStats& stats, int l,
                        const SolverConfig& cfg);

enum class FairnessMode { kDp, kCdp };
std::string to_string(FairnessMode mode);
FairnessMode fairness_mode_from_string(const std::string& name);

/// Deployable rule: CATE model, training-set group frequencies and one
/// multiplier per group. In DP mode every row maps to group 0.
class FairRule {
 public:
  FairRule() = default;
  FairRule(CateModel cate, GroupStats groups, std::map<int, double> omegas,
           std::map<int, SolveDiagnostics> diagnostics, SolverConfig config, FairnessMode mode,
           double bandwidth);

  /// +1 iff delta(z) - omega_l * psi_l(s) > 0. Unknown l throws
  /// UnknownGroupError.
  int decide(std::span<const double> x, int s, int l) const;
  /// Perturbed score delta(z) - omega_l * psi_l(s).
  double score(std::span<const double> x, int s, int l) const;
  /// Scores for all rows, using one batched CATE evaluation.
  std::vector<double> scores(const Dataset& ds) const;

  int fairness_group(int l) const { return mode_ == FairnessMode::kDp ? 0 : l; }
  double omega(int l) const;

  const CateModel& cate() const { return cate_; }
  const GroupStats& groups() const { return groups_; }
  const std::map<int, double>& omegas() const { return omegas_; }
  const std::map<int, SolveDiagnostics>& diagnostics() const { return diagnostics_; }
  const SolverConfig& config() const { return config_; }
  FairnessMode mode() const { return mode_; }
  double bandwidth() const { return bandwidth_; }

 private:
  CateModel cate_;
  GroupStats groups_;
  std::map<int, double> omegas_;
  std::map<int, SolveDiagnostics> diagnostics_;
  SolverConfig config_;
  FairnessMode mode_ = FairnessMode::kCdp;
  double bandwidth_ = 0.0;
};

/// Steps 2-4 on `train` with an already fitted CATE.
FairRule fit_fair_rule(const Dataset& train, const CateModel& cate, const SolverConfig& cfg,
                       FairnessMode mode);
/// Full pipeline: CATE on `train` (epoch selection on `val`), then the
/// multipliers on `train` only.
FairRule fit_fair_rule(const Dataset& train, const Dataset& val, const RegressorSpec& reg_spec,
                       const SolverConfig& cfg, FairnessMode mode);

}  // namespace fairidr

#endif  // FAIRIDR_FAIRNESS_HPP_
