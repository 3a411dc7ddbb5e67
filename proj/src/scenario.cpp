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

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "fairidr/error.hpp"
#include "fairidr/simgen.hpp"

namespace fairidr {

std::vector<std::string> ScenarioSpec::validate() const {
  case_dimension(case_id);
  if (n < 10) throw ConfigError("n must be at least 10");
  if (n_test < 2) throw ConfigError("n_test must be at least 2");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  SolverConfig probe = solver;
  probe.epsilon = epsilon;
  probe.validate();
  std::vector<std::string> warnings;
  const bool paired = (case_id <= 2) == (mode == FairnessMode::kDp);
  if (!paired) {
    warnings.push_back("case " + std::to_string(case_id) + " is normally run in " +
                       (case_id <= 2 ? "dp" : "cdp") + " mode; running " + to_string(mode));
  }
  return warnings;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(out)) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

long long to_integer(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw ConfigError("key '" + key + "': expected an integer");
  return static_cast<long long>(d);
}

std::optional<double> to_optional(const std::string& key, const std::string& v) {
  if (v == "auto") return std::nullopt;
  return to_double(key, v);
}

}  // namespace

void set_scenario_key(ScenarioSpec& spec, const std::string& key, const std::string& value) {
  auto& reg = spec.reg_spec;
  auto& sol = spec.solver;
  if (key == "case") {
    spec.case_id = static_cast<int>(to_integer(key, value));
  } else if (key == "n") {
    spec.n = static_cast<std::size_t>(to_integer(key, value));
  } else if (key == "n_test") {
    spec.n_test = static_cast<std::size_t>(to_integer(key, value));
  } else if (key == "replications") {
    spec.replications = static_cast<int>(to_integer(key, value));
  } else if (key == "epsilon") {
    spec.epsilon = to_double(key, value);
  } else if (key == "mode") {
    spec.mode = fairness_mode_from_string(value);
  } else if (key == "seed") {
    spec.seed = static_cast<std::uint64_t>(to_integer(key, value));
  } else if (key == "regressor.kind") {
    reg.kind = regressor_kind_from_string(value);
  } else if (key == "regressor.width") {
    reg.width = static_cast<int>(to_integer(key, value));
  } else if (key == "regressor.depth") {
    reg.depth = static_cast<int>(to_integer(key, value));
  } else if (key == "regressor.epochs") {
    reg.epochs = static_cast<int>(to_integer(key, value));
  } else if (key == "regressor.learning_rate") {
    reg.learning_rate = to_double(key, value);
  } else if (key == "regressor.batch_size") {
    reg.batch_size = static_cast<int>(to_integer(key, value));
  } else if (key == "regressor.output_clip") {
    reg.output_clip = to_optional(key, value);
  } else if (key == "regressor.ridge_lambda") {
    reg.ridge_lambda = to_double(key, value);
  } else if (key == "regressor.basis_degree") {
    reg.basis_degree = static_cast<int>(to_integer(key, value));
  } else if (key == "solver.bandwidth") {
    sol.bandwidth = to_optional(key, value);
  } else if (key == "solver.K") {
    sol.bracket = to_optional(key, value);
  } else if (key == "solver.bracket_growth") {
    sol.bracket_growth = to_double(key, value);
  } else if (key == "solver.max_bracket_doublings") {
    sol.max_bracket_doublings = static_cast<int>(to_integer(key, value));
  } else if (key == "solver.tol_g") {
    sol.tol_g = to_double(key, value);
  } else if (key == "solver.tol_omega") {
    sol.tol_omega = to_optional(key, value);
  } else if (key == "solver.max_iter") {
    sol.max_iter = static_cast<int>(to_integer(key, value));
  } else if (key == "solver.constraint_scale") {
    sol.scale = constraint_scale_from_string(value);
  } else {
    throw ConfigError("unknown scenario key '" + key + "'");
  }
}

ScenarioSpec parse_scenario(std::istream& in, ScenarioSpec base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    set_scenario_key(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

ScenarioSpec load_scenario(const std::filesystem::path& path, ScenarioSpec base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
  return parse_scenario(in, std::move(base));
}

MetricSummary summarize(std::span<const double> values) {
  MetricSummary out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

std::string method_name(FairnessMode mode) {
  return mode == FairnessMode::kDp ? "dp-idr" : "cdp-idr";
}

namespace {

struct ReplicationOutcome {
  std::uint64_t seed = 0;
  // One entry per epsilon; empty optional means that (rep, eps) failed.
  std::vector<std::optional<ResultRow>> rows;
  std::vector<std::string> errors;
};

ReplicationOutcome run_replication(const ScenarioSpec& spec, std::span<const double> epsilons,
                                   int index) {
  ReplicationOutcome out;
  out.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(index));
  out.rows.resize(epsilons.size());
  out.errors.resize(epsilons.size());
  const std::string tag = "replication " + std::to_string(index) + ": ";
  try {
    const Dataset sample = generate(spec.case_id, spec.n, out.seed);
    const Dataset test = generate(spec.case_id, spec.n_test, derive_seed(out.seed, 1));
    const DatasetSplit parts = split(sample, {0.8, 0.2, derive_seed(out.seed, 2)});
    RegressorSpec reg = spec.reg_spec;
    reg.seed = derive_seed(out.seed, 3);
    const CateModel cate = fit_cate(parts.train, parts.val, reg);
    const CateOracle oracle = case_oracle(spec.case_id);

    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      try {
        SolverConfig cfg = spec.solver;
        cfg.epsilon = epsilons[e];
        const FairRule rule = fit_fair_rule(parts.train, cate, cfg, spec.mode);
        const Decisions decisions = apply_rule(rule, test);
        ResultRow row;
        row.case_id = spec.case_id;
        row.method = method_name(spec.mode);
        row.epsilon = epsilons[e];
        row.n = spec.n;
        row.seed = out.seed;
        row.metrics =
            evaluate_decisions(decisions, test, policy_value_true(decisions, test, oracle));
        out.rows[e] = std::move(row);
      } catch (const Error& err) {
        out.errors[e] = tag + err.name() + ": " + err.what();
      } catch (const std::exception& err) {
        out.errors[e] = tag + "internal-error: " + err.what();
      }
    }
  } catch (const Error& err) {
    for (auto& msg : out.errors) msg = tag + err.name() + ": " + err.what();
  } catch (const std::exception& err) {
    for (auto& msg : out.errors) msg = tag + "internal-error: " + err.what();
  }
  return out;
}

}  // namespace

std::vector<ReplicationSummary> epsilon_sweep(const ScenarioSpec& spec,
                                              std::span<const double> epsilons, int jobs) {
  spec.validate();
  if (epsilons.empty()) throw ConfigError("epsilon list is empty");
  if (!std::is_sorted(epsilons.begin(), epsilons.end())) {
    throw ConfigError("epsilon list must be sorted ascending");
  }
  for (double e : epsilons) {
    if (!(e >= 0.0)) throw ConfigError("epsilon values must be >= 0");
  }

  std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(spec.replications));
  const int threads = std::max(1, jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int r = 0; r < spec.replications; ++r) {
    outcomes[static_cast<std::size_t>(r)] = run_replication(spec, epsilons, r);
  }

  std::vector<ReplicationSummary> summaries;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    ReplicationSummary s;
    s.case_id = spec.case_id;
    s.method = method_name(spec.mode);
    s.epsilon = epsilons[e];
    s.n = spec.n;
    std::vector<double> uf, cuf, pv;
    for (auto& rep : outcomes) {
      if (rep.rows[e]) {
        uf.push_back(rep.rows[e]->metrics.uf);
        cuf.push_back(rep.rows[e]->metrics.cuf);
        pv.push_back(rep.rows[e]->metrics.pv);
        s.rows.push_back(*rep.rows[e]);
      } else {
        s.failures.push_back(rep.errors[e]);
      }
    }
    s.uf = summarize(uf);
    s.cuf = summarize(cuf);
    s.pv = summarize(pv);
    s.n_ok = s.rows.size();
    s.n_failed = s.failures.size();
    summaries.push_back(std::move(s));
  }
  return summaries;
}

ReplicationSummary run_scenario(const ScenarioSpec& spec, int jobs) {
  const double eps[] = {spec.epsilon};
  return std::move(epsilon_sweep(spec, eps, jobs).front());
}

std::vector<int> result_group_labels(std::span<const ReplicationSummary> summaries) {
  std::set<int> labels;
  for (const auto& s : summaries) {
    for (const auto& row : s.rows) {
      for (const auto& [l, _] : row.metrics.per_group_uf) labels.insert(l);
      for (int l : row.metrics.excluded_groups) labels.insert(l);
    }
  }
  return {labels.begin(), labels.end()};
}

void write_replication_csv(std::ostream& out, std::span<const ReplicationSummary> summaries) {
  const auto labels = result_group_labels(summaries);
  write_result_header(out, labels);
  for (const auto& s : summaries) {
    for (const auto& row : s.rows) write_result_row(out, row, labels);
  }
}

void write_summary_csv(std::ostream& out, std::span<const ReplicationSummary> summaries) {
  out << "case,method,epsilon,n,metric,mean,sd,n_ok\n";
  for (const auto& s : summaries) {
    const std::pair<const char*, const MetricSummary*> metrics[] = {
        {"uf", &s.uf}, {"cuf", &s.cuf}, {"pv", &s.pv}};
    for (const auto& [name, m] : metrics) {
      out << s.case_id << ',' << s.method << ',' << format_metric(s.epsilon) << ',' << s.n << ','
          << name << ',' << format_metric(m->mean) << ',' << format_metric(m->sd) << ','
          << s.n_ok << '\n';
    }
  }
}

}  // namespace fairidr
