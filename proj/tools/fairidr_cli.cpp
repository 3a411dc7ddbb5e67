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

// fairidr command-line driver.
//
//   fairidr simulate SCENARIO [OUT_DIR]            per-replication + summary CSV
//   fairidr sweep SCENARIO --epsilons LIST [OUT_DIR]
//   fairidr fit TRAIN_CSV MODEL_JSON [schema, solver, regressor flags]
//   fairidr evaluate MODEL_JSON TEST_CSV REPORT_CSV [--with-estimated-pv]
//   fairidr gcurve MODEL_JSON DATA_CSV OUT_CSV --l L --omega A:B:STEP
//   fairidr synth {1,2,3,4,toy,insurance} OUT_CSV --n N --seed S
//
// Exit status: 0 success, 1 runtime error (prints the error name), 2 usage.
// Progress and diagnostics go to stderr as logfmt lines.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairidr/atomic_file.hpp"
#include "fairidr/error.hpp"
#include "fairidr/kernels.hpp"
#include "fairidr/serialize.hpp"
#include "fairidr/simgen.hpp"

namespace fairidr {
namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& what, std::string remedy)
      : std::runtime_error(what), remedy_(std::move(remedy)) {}
  const std::string& remedy() const { return remedy_; }

 private:
  std::string remedy_;
};

// --- logging -----------------------------------------------------------------

std::string quote_value(const std::string& v) {
  if (!v.empty() && v.find_first_of(" \"=") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

class LogLine {
 public:
  LogLine(const char* level, const std::string& event) {
    os_ << "level=" << level << " event=" << event;
  }
  ~LogLine() { std::cerr << os_.str() << '\n'; }

  template <typename T>
  LogLine& kv(const std::string& key, const T& value) {
    std::ostringstream v;
    v.precision(10);
    v << value;
    os_ << ' ' << key << '=' << quote_value(v.str());
    return *this;
  }

 private:
  std::ostringstream os_;
};

bool g_quiet = false;

std::optional<LogLine> info(const std::string& event) {
  if (g_quiet) return std::nullopt;
  return std::optional<LogLine>(std::in_place, "info", event);
}

// --- shared option groups --------------------------------------------------

/// Overrides applied on top of defaults or a scenario file, keyed by the
/// scenario-file key they set.
struct Overrides {
  std::map<std::string, std::string> values;
  std::vector<std::string> raw_sets;

  void bind(CLI::App* app, const std::string& flag, const std::string& key,
            const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }

  void apply(ScenarioSpec& spec) const {
    for (const auto& kv : raw_sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw UsageError("--set expects key=value, got '" + kv + "'",
                         "write it as --set solver.tol_g=1e-7");
      }
      set_scenario_key(spec, kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, value] : values) set_scenario_key(spec, key, value);
  }
};

void add_model_flags(CLI::App* app, Overrides& o) {
  o.bind(app, "--mode", "mode", "dp or cdp");
  o.bind(app, "--epsilon", "epsilon", "fairness tolerance (>= 0)");
  o.bind(app, "--bandwidth,-H", "solver.bandwidth", "smoothing bandwidth h, or 'auto'");
  o.bind(app, "--K", "solver.K", "initial bracket half-width, or 'auto'");
  o.bind(app, "--bracket-growth", "solver.bracket_growth", "bracket expansion factor");
  o.bind(app, "--max-bracket-doublings", "solver.max_bracket_doublings", "bracket expansions");
  o.bind(app, "--tol-g", "solver.tol_g", "root residual tolerance");
  o.bind(app, "--tol-omega", "solver.tol_omega", "bracket width tolerance, or 'auto'");
  o.bind(app, "--max-iter", "solver.max_iter", "bisection iteration cap");
  o.bind(app, "--constraint-scale", "solver.constraint_scale", "sample or group");
  o.bind(app, "--regressor", "regressor.kind", "relu-net or ridge-basis");
  o.bind(app, "--width", "regressor.width", "hidden units per layer");
  o.bind(app, "--depth", "regressor.depth", "hidden layers");
  o.bind(app, "--epochs", "regressor.epochs", "training epochs");
  o.bind(app, "--learning-rate", "regressor.learning_rate", "optimizer step size");
  o.bind(app, "--batch-size", "regressor.batch_size", "mini-batch size");
  o.bind(app, "--output-clip", "regressor.output_clip", "prediction bound B, or 'auto'");
  o.bind(app, "--ridge-lambda", "regressor.ridge_lambda", "ridge penalty");
  o.bind(app, "--basis-degree", "regressor.basis_degree", "polynomial degree");
  o.bind(app, "--seed", "seed", "master seed");
  app->add_option("--set", o.raw_sets, "any scenario key, as key=value (repeatable)");
}

void add_scenario_flags(CLI::App* app, Overrides& o) {
  add_model_flags(app, o);
  o.bind(app, "--case", "case", "simulation case 1-4");
  o.bind(app, "--n", "n", "training + validation size");
  o.bind(app, "--n-test", "n_test", "test size");
  o.bind(app, "--replications", "replications", "number of replications");
}

struct SchemaFlags {
  std::string x_cols;
  CsvSchema schema;

  void bind(CLI::App* app) {
    app->add_option("--x-cols", x_cols, "comma-separated covariate columns (default: all others)");
    app->add_option("--s-col", schema.s_col, "sensitive attribute column")->capture_default_str();
    app->add_option("--l-col", schema.l_col, "legitimate group column")->capture_default_str();
    app->add_option("--a-col", schema.a_col, "treatment column")->capture_default_str();
    app->add_option("--r-col", schema.r_col, "reward column")->capture_default_str();
    app->add_flag("--treatment-01", schema.treatment_zero_one,
                  "treatment column is coded 0/1 (0 -> -1)");
  }

  CsvSchema resolve() const {
    CsvSchema out = schema;
    std::stringstream ss(x_cols);
    std::string col;
    while (std::getline(ss, col, ',')) {
      if (!col.empty()) out.x_cols.push_back(col);
    }
    return out;
  }
};

std::filesystem::path output_dir(const std::string& given) {
  if (!given.empty()) return given;
  if (const char* env = std::getenv("FAIRIDR_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

std::vector<double> parse_epsilons(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad epsilon '" + item + "'", "pass a list like --epsilons 0,0.05,0.1");
    }
  }
  if (out.empty()) throw UsageError("empty epsilon list", "pass a list like --epsilons 0,0.05");
  std::sort(out.begin(), out.end());
  return out;
}

void log_spec(const ScenarioSpec& spec) {
  const auto& r = spec.reg_spec;
  const auto& s = spec.solver;
  auto opt = [](const std::optional<double>& v) {
    return v ? std::to_string(*v) : std::string("auto");
  };
  if (auto line = info("config")) {
    line->kv("case", spec.case_id)
        .kv("n", spec.n)
        .kv("n_test", spec.n_test)
        .kv("replications", spec.replications)
        .kv("mode", to_string(spec.mode))
        .kv("epsilon", spec.epsilon)
        .kv("seed", spec.seed)
        .kv("regressor", to_string(r.kind))
        .kv("width", r.width)
        .kv("depth", r.depth)
        .kv("epochs", r.epochs)
        .kv("learning_rate", r.learning_rate)
        .kv("batch_size", r.batch_size)
        .kv("basis_degree", r.basis_degree)
        .kv("ridge_lambda", r.ridge_lambda)
        .kv("bandwidth", opt(s.bandwidth))
        .kv("K", opt(s.bracket))
        .kv("tol_g", s.tol_g)
        .kv("tol_omega", opt(s.tol_omega))
        .kv("max_iter", s.max_iter)
        .kv("constraint_scale", to_string(s.scale));
  }
  for (const auto& w : spec.validate()) LogLine("warn", "config").kv("message", w);
}

void log_rule(const FairRule& rule) {
  for (const auto& [l, d] : rule.diagnostics()) {
    if (auto line = info("solve")) {
      line->kv("l", l)
          .kv("omega", rule.omegas().at(l))
          .kv("case", to_string(d.solve_case))
          .kv("stop", to_string(d.stop))
          .kv("g0", d.indicator_at_zero)
          .kv("target", d.target)
          .kv("residual", d.residual)
          .kv("iterations", d.iterations)
          .kv("K", d.bracket);
    }
  }
}

void log_summaries(const std::vector<ReplicationSummary>& summaries) {
  for (const auto& s : summaries) {
    if (auto line = info("summary")) {
      line->kv("epsilon", s.epsilon)
          .kv("uf_mean", s.uf.mean)
          .kv("uf_sd", s.uf.sd)
          .kv("cuf_mean", s.cuf.mean)
          .kv("cuf_sd", s.cuf.sd)
          .kv("pv_mean", s.pv.mean)
          .kv("pv_sd", s.pv.sd)
          .kv("n_ok", s.n_ok)
          .kv("n_failed", s.n_failed);
    }
    for (const auto& f : s.failures) LogLine("warn", "replication").kv("message", f);
  }
}

void write_tables(const std::filesystem::path& dir,
                  const std::vector<ReplicationSummary>& summaries) {
  write_file_atomic(dir / "replications.csv",
                    [&](std::ostream& out) { write_replication_csv(out, summaries); });
  write_file_atomic(dir / "summary.csv",
                    [&](std::ostream& out) { write_summary_csv(out, summaries); });
  if (auto line = info("wrote")) {
    line->kv("replications", (dir / "replications.csv").string())
        .kv("summary", (dir / "summary.csv").string());
  }
}

// --- subcommands -------------------------------------------------------------

struct ScenarioCommand {
  std::string scenario;
  std::string out_dir;
  std::string epsilons;
  Overrides overrides;

  ScenarioSpec load() const {
    ScenarioSpec spec = load_scenario(scenario);
    overrides.apply(spec);
    return spec;
  }
};

int run_simulate(const ScenarioCommand& cmd, int jobs) {
  const ScenarioSpec spec = cmd.load();
  log_spec(spec);
  const std::vector<ReplicationSummary> summaries{run_scenario(spec, jobs)};
  log_summaries(summaries);
  write_tables(output_dir(cmd.out_dir), summaries);
  return 0;
}

int run_sweep(const ScenarioCommand& cmd, int jobs) {
  const ScenarioSpec spec = cmd.load();
  const auto eps = parse_epsilons(cmd.epsilons);
  log_spec(spec);
  const auto summaries = epsilon_sweep(spec, eps, jobs);
  log_summaries(summaries);
  write_tables(output_dir(cmd.out_dir), summaries);
  return 0;
}

struct FitCommand {
  std::string train_csv;
  std::string model;
  std::string val_csv;
  std::string config;
  double val_frac = 0.2;
  SchemaFlags schema;
  Overrides overrides;
};

ScenarioSpec model_settings(const std::string& config, const Overrides& overrides) {
  ScenarioSpec spec;
  spec.mode = FairnessMode::kCdp;
  if (!config.empty()) spec = load_scenario(config, spec);
  overrides.apply(spec);
  spec.solver.epsilon = spec.epsilon;
  spec.solver.validate();
  return spec;
}

int run_fit(const FitCommand& cmd) {
  const ScenarioSpec settings = model_settings(cmd.config, cmd.overrides);
  const CsvSchema schema = cmd.schema.resolve();
  const Dataset data = load_csv(cmd.train_csv, schema);
  Dataset train;
  Dataset val;
  if (!cmd.val_csv.empty()) {
    train = data;
    val = load_csv(cmd.val_csv, schema);
  } else if (cmd.val_frac > 0.0) {
    auto parts = split(data, {1.0 - cmd.val_frac, cmd.val_frac, derive_seed(settings.seed, 2)});
    train = std::move(parts.train);
    val = std::move(parts.val);
  } else {
    train = data;
    val = Dataset({}, data.p());
  }
  if (auto line = info("data")) {
    line->kv("train_csv", cmd.train_csv)
        .kv("n_train", train.size())
        .kv("n_val", val.size())
        .kv("p", data.p())
        .kv("groups", train.group_labels().size());
  }
  if (auto line = info("config")) {
    line->kv("mode", to_string(settings.mode))
        .kv("epsilon", settings.solver.epsilon)
        .kv("regressor", to_string(settings.reg_spec.kind))
        .kv("seed", settings.seed)
        .kv("constraint_scale", to_string(settings.solver.scale));
  }
  RegressorSpec reg = settings.reg_spec;
  reg.seed = derive_seed(settings.seed, 3);
  const FairRule rule = fit_fair_rule(train, val, reg, settings.solver, settings.mode);
  log_rule(rule);
  save_rule(rule, cmd.model);
  if (auto line = info("wrote")) line->kv("model", cmd.model).kv("h", rule.bandwidth());
  return 0;
}

struct EvaluateCommand {
  std::string model;
  std::string test_csv;
  std::string report;
  bool estimated_pv = false;
  std::string eval_cate;
  int oracle_case = 0;
  SchemaFlags schema;
  Overrides overrides;
};

int run_evaluate(const EvaluateCommand& cmd) {
  const FairRule rule = load_rule(cmd.model);
  const Dataset test = load_csv(cmd.test_csv, cmd.schema.resolve());
  const Decisions decisions = apply_rule(rule, test);

  std::optional<double> pv_true;
  if (cmd.oracle_case != 0) {
    pv_true = policy_value_true(decisions, test, case_oracle(cmd.oracle_case));
  }

  std::optional<double> pv_est;
  if (cmd.estimated_pv) {
    CateModel eval;
    if (!cmd.eval_cate.empty()) {
      eval = load_cate(cmd.eval_cate);
    } else {
      // Evaluation CATE fitted on the test rows, independent of the rule's.
      ScenarioSpec settings = model_settings("", cmd.overrides);
      const auto parts = split(test, {0.8, 0.2, derive_seed(settings.seed, 4)});
      RegressorSpec reg = settings.reg_spec;
      reg.seed = derive_seed(settings.seed, 5);
      eval = fit_cate(parts.train, parts.val, reg);
    }
    pv_est = policy_value_estimated(decisions, test, eval);
  }

  const MetricsReport m = evaluate_decisions(decisions, test, pv_true.value_or(0.0));
  std::vector<int> labels = test.group_labels();
  write_file_atomic(cmd.report, [&](std::ostream& out) {
    out << "n_test,uf,cuf,pv_true,pv_estimated,treated_share";
    for (int l : labels) out << ",uf_l" << l;
    out << '\n';
    double treated = 0.0;
    for (int d : decisions) treated += d == 1;
    out << m.n_test << ',' << format_metric(m.uf) << ',' << format_metric(m.cuf) << ','
        << (pv_true ? format_metric(*pv_true) : "") << ','
        << (pv_est ? format_metric(*pv_est) : "") << ','
        << format_metric(treated / static_cast<double>(decisions.size()));
    for (int l : labels) {
      out << ',';
      if (auto it = m.per_group_uf.find(l); it != m.per_group_uf.end()) {
        out << format_metric(it->second);
      }
    }
    out << '\n';
  });
  if (auto line = info("evaluate")) {
    line->kv("n_test", m.n_test).kv("uf", m.uf).kv("cuf", m.cuf);
    if (pv_true) line->kv("pv_true", *pv_true);
    if (pv_est) line->kv("pv_estimated", *pv_est);
    for (int l : m.excluded_groups) line->kv("excluded_l", l);
  }
  if (auto line = info("wrote")) line->kv("report", cmd.report);
  return 0;
}

struct GcurveCommand {
  std::string model;
  std::string data_csv;
  std::string out_csv;
  int l = 0;
  std::string omega = "-2:2:0.01";
  std::string bandwidth;
  SchemaFlags schema;
};

std::vector<double> parse_grid(const std::string& spec) {
  double a = 0, b = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) || b < a ||
      !in.eof()) {
    throw UsageError("bad --omega range '" + spec + "'", "use start:stop:step, e.g. -2:2:0.01");
  }
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
  if (count > 10'000'000) throw UsageError("--omega grid too large", "use a coarser step");
  std::vector<double> out;
  for (long k = 0; k <= count; ++k) out.push_back(a + static_cast<double>(k) * step);
  return out;
}

int run_gcurve(const GcurveCommand& cmd) {
  const auto grid = parse_grid(cmd.omega);
  std::optional<double> h_flag;
  if (!cmd.bandwidth.empty()) {
    try {
      h_flag = std::stod(cmd.bandwidth);
    } catch (const std::exception&) {
      throw UsageError("bad --bandwidth '" + cmd.bandwidth + "'", "pass a positive number");
    }
    if (!(*h_flag > 0.0)) throw UsageError("bandwidth must be > 0", "pass --bandwidth with h > 0");
  }
  const FairRule rule = load_rule(cmd.model);
  const Dataset data = load_csv(cmd.data_csv, cmd.schema.resolve());
  const Dataset grouped =
      rule.mode() == FairnessMode::kDp ? data.with_constant_group(0) : data;
  const GroupStats stats = estimate_group_stats(grouped);
  const int group = rule.fairness_group(cmd.l);
  const double h = h_flag.value_or(rule.bandwidth());
  const auto delta = rule.cate().predict(data);
  const auto constraint = GroupConstraint::build(grouped, delta, stats, group);
  write_file_atomic(cmd.out_csv, [&](std::ostream& out) {
    out << "omega,g_hat,g_indicator\n";
    out.precision(17);
    for (double w : grid) {
      out << w << ',' << constraint.smoothed(w, h) << ',' << constraint.indicator(w) << '\n';
    }
  });
  if (auto line = info("gcurve")) {
    line->kv("l", cmd.l).kv("group", group).kv("h", h).kv("points", grid.size());
  }
  if (auto line = info("wrote")) line->kv("curve", cmd.out_csv);
  return 0;
}

struct SynthCommand {
  std::string which;
  std::string out_csv;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
};

int run_synth(const SynthCommand& cmd) {
  Dataset ds;
  if (cmd.which == "toy") {
    ds = generate_s_invariant_toy(cmd.n, cmd.seed);
  } else if (cmd.which == "insurance") {
    ds = generate_insurance_like(cmd.n, cmd.seed);
  } else if (cmd.which.size() == 1 && cmd.which[0] >= '1' && cmd.which[0] <= '4') {
    ds = generate(cmd.which[0] - '0', cmd.n, cmd.seed);
  } else {
    throw UsageError("unknown dataset '" + cmd.which + "'",
                     "choose one of 1, 2, 3, 4, toy, insurance");
  }
  save_csv(ds, cmd.out_csv);
  if (auto line = info("wrote")) {
    line->kv("data", cmd.out_csv).kv("kind", cmd.which).kv("n", cmd.n).kv("seed", cmd.seed);
  }
  return 0;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Fairness-constrained individualized decision rules", "fairidr"};
  app.require_subcommand(1);
  int jobs = 1;
  app.add_option("--jobs,-j", jobs, "worker threads for replications and row kernels")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet,-q", g_quiet, "suppress info log lines");

  ScenarioCommand simulate;
  auto* sim = app.add_subcommand("simulate", "run replications of one scenario");
  sim->add_option("scenario", simulate.scenario, "scenario file (key = value)")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("out_dir", simulate.out_dir, "output directory (default $FAIRIDR_OUT_DIR or .)");
  add_scenario_flags(sim, simulate.overrides);

  ScenarioCommand sweep;
  auto* swp = app.add_subcommand("sweep", "run a scenario over several tolerances");
  swp->add_option("scenario", sweep.scenario, "scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  swp->add_option("out_dir", sweep.out_dir, "output directory (default $FAIRIDR_OUT_DIR or .)");
  swp->add_option("--epsilons", sweep.epsilons, "comma-separated tolerances")->required();
  add_scenario_flags(swp, sweep.overrides);

  FitCommand fit;
  auto* fit_app = app.add_subcommand("fit", "fit a fair rule on a CSV and save it as JSON");
  fit_app->add_option("train_csv", fit.train_csv, "training data")->required();
  fit_app->add_option("model", fit.model, "output model path (JSON)")->required();
  fit_app->add_option("--val-csv", fit.val_csv, "separate validation file for epoch selection");
  fit_app->add_option("--val-frac", fit.val_frac, "share of train_csv held out for validation")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.9));
  fit_app->add_option("--config", fit.config, "key = value file for model settings")
      ->check(CLI::ExistingFile);
  fit.schema.bind(fit_app);
  add_model_flags(fit_app, fit.overrides);

  EvaluateCommand evaluate;
  auto* eval_app = app.add_subcommand("evaluate", "apply a saved rule and report UF/CUF/PV");
  eval_app->add_option("model", evaluate.model, "rule JSON")->required();
  eval_app->add_option("test_csv", evaluate.test_csv, "evaluation data")->required();
  eval_app->add_option("report", evaluate.report, "output report CSV")->required();
  eval_app->add_flag("--with-estimated-pv", evaluate.estimated_pv,
                     "estimate PV with a separately fitted CATE");
  eval_app->add_option("--eval-cate", evaluate.eval_cate, "CATE JSON to use for estimated PV");
  eval_app->add_option("--oracle-case", evaluate.oracle_case,
                       "simulation case whose true CATE gives PV")
      ->check(CLI::Range(1, 4));
  evaluate.schema.bind(eval_app);
  add_model_flags(eval_app, evaluate.overrides);

  GcurveCommand gcurve;
  auto* g_app = app.add_subcommand("gcurve", "tabulate the smoothed constraint of one group");
  g_app->add_option("model", gcurve.model, "rule JSON")->required();
  g_app->add_option("data_csv", gcurve.data_csv, "rows to evaluate on")->required();
  g_app->add_option("out_csv", gcurve.out_csv, "output CSV (omega,g_hat,g_indicator)")->required();
  g_app->add_option("--l", gcurve.l, "legitimate group label")->capture_default_str();
  g_app->add_option("--omega", gcurve.omega, "grid start:stop:step")->capture_default_str();
  g_app->add_option("--bandwidth,-H", gcurve.bandwidth, "override the rule's bandwidth");
  gcurve.schema.bind(g_app);

  SynthCommand synth;
  auto* syn = app.add_subcommand("synth", "write a simulated dataset as CSV");
  syn->add_option("which", synth.which, "1, 2, 3, 4, toy or insurance")->required();
  syn->add_option("out_csv", synth.out_csv, "output CSV")->required();
  syn->add_option("--n", synth.n, "rows")->capture_default_str()->check(CLI::PositiveNumber);
  syn->add_option("--seed", synth.seed, "seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string sub;
    for (const auto* s : app.get_subcommands()) sub = s->get_name();
    std::cerr << "usage error: " << e.what() << '\n'
              << "remedy: run 'fairidr " << (sub.empty() ? "" : sub + " ") << "--help'\n";
    return kExitUsage;
  }

  kernels::set_kernel_threads(jobs);
  if (sim->parsed()) return run_simulate(simulate, jobs);
  if (swp->parsed()) return run_sweep(sweep, jobs);
  if (fit_app->parsed()) return run_fit(fit);
  if (eval_app->parsed()) return run_evaluate(evaluate);
  if (g_app->parsed()) return run_gcurve(gcurve);
  return run_synth(synth);
}

}  // namespace
}  // namespace fairidr

int main(int argc, char** argv) {
  try {
    return fairidr::dispatch(argc, argv);
  } catch (const fairidr::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nremedy: " << e.remedy() << '\n';
    return fairidr::kExitUsage;
  } catch (const fairidr::Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
    return fairidr::kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: internal-error: " << e.what() << '\n';
    return fairidr::kExitRuntime;
  }
}
