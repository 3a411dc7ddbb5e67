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

#include "fairidr/serialize.hpp"

#include <fstream>
#include <sstream>

#include "fairidr/atomic_file.hpp"
#include "fairidr/error.hpp"
#include "json.hpp"

namespace fairidr {

using nlohmann::json;

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vec_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json("auto"); }

std::optional<double> optional_from_json(const json& j) {
  if (j.is_string()) return std::nullopt;
  return j.get<double>();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_or_throw(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  }
}

}  // namespace

struct RegressorCodec {
  static json encode(const FittedRegressor& reg) {
    const auto& spec = reg.spec_;
    json j;
    j["kind"] = to_string(spec.kind);
    j["width"] = spec.width;
    j["depth"] = spec.depth;
    j["p"] = reg.input_dim_ - 2;
    j["B"] = reg.clip_;
    j["input_dim"] = reg.input_dim_;
    j["basis_degree"] = spec.basis_degree;
    j["ridge_lambda"] = spec.ridge_lambda;
    j["learning_rate"] = spec.learning_rate;
    j["epochs"] = spec.epochs;
    j["batch_size"] = spec.batch_size;
    j["seed"] = spec.seed;
    j["train_loss"] = reg.train_loss_;
    j["val_loss"] = reg.val_loss_;
    j["best_epoch"] = reg.best_epoch_;
    if (spec.kind == RegressorKind::kReluNet) {
      j["in_mean"] = vec_to_json(reg.in_mean_);
      j["in_scale"] = vec_to_json(reg.in_scale_);
      j["out_mean"] = reg.out_mean_;
      j["out_scale"] = reg.out_scale_;
      j["parameters"] = reg.net_.parameters();
    } else {
      j["intercept"] = reg.intercept_;
      j["coef"] = vec_to_json(reg.coef_);
    }
    return j;
  }

  static FittedRegressor decode(const json& j) {
    FittedRegressor reg;
    auto& spec = reg.spec_;
    spec.kind = regressor_kind_from_string(j.at("kind").get<std::string>());
    spec.width = j.at("width").get<int>();
    spec.depth = j.at("depth").get<int>();
    spec.basis_degree = j.at("basis_degree").get<int>();
    spec.ridge_lambda = j.at("ridge_lambda").get<double>();
    spec.learning_rate = j.at("learning_rate").get<double>();
    spec.epochs = j.at("epochs").get<int>();
    spec.batch_size = j.at("batch_size").get<int>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    reg.clip_ = j.at("B").get<double>();
    spec.output_clip = reg.clip_;
    reg.input_dim_ = j.at("input_dim").get<int>();
    reg.train_loss_ = j.at("train_loss").get<double>();
    reg.val_loss_ = j.at("val_loss").get<double>();
    reg.best_epoch_ = j.at("best_epoch").get<int>();
    if (spec.kind == RegressorKind::kReluNet) {
      reg.in_mean_ = vec_from_json(j.at("in_mean"));
      reg.in_scale_ = vec_from_json(j.at("in_scale"));
      reg.out_mean_ = j.at("out_mean").get<double>();
      reg.out_scale_ = j.at("out_scale").get<double>();
      reg.net_ = ReluNetwork(reg.input_dim_, spec.width, spec.depth, 0);
      reg.net_.set_parameters(j.at("parameters").get<std::vector<double>>());
      if (reg.in_mean_.size() != reg.input_dim_ || reg.in_scale_.size() != reg.input_dim_) {
        throw ShapeError("standardization vectors do not match input_dim");
      }
    } else {
      reg.intercept_ = j.at("intercept").get<double>();
      reg.coef_ = vec_from_json(j.at("coef"));
      if (reg.coef_.size() != static_cast<Eigen::Index>(reg.input_dim_) * spec.basis_degree) {
        throw ShapeError("coefficient count does not match input_dim * basis_degree");
      }
    }
    return reg;
  }
};

namespace {

json cate_json(const CateModel& cate) {
  return {{"format", "fairidr.cate/1"},
          {"p", cate.p()},
          {"m1", RegressorCodec::encode(cate.treated())},
          {"m0", RegressorCodec::encode(cate.control())}};
}

CateModel cate_from(const json& j) {
  return CateModel(RegressorCodec::decode(j.at("m1")), RegressorCodec::decode(j.at("m0")),
                   j.at("p").get<std::size_t>());
}

}  // namespace

std::string cate_to_json(const CateModel& cate) { return cate_json(cate).dump(1); }

CateModel cate_from_json(const std::string& text) {
  try {
    return cate_from(parse_or_throw(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid CATE document: ") + e.what());
  }
}

std::string rule_to_json(const FairRule& rule) {
  const auto& cfg = rule.config();
  json solver = {{"bandwidth", optional_to_json(cfg.bandwidth)},
                 {"K", optional_to_json(cfg.bracket)},
                 {"bracket_growth", cfg.bracket_growth},
                 {"max_bracket_doublings", cfg.max_bracket_doublings},
                 {"tol_omega", optional_to_json(cfg.tol_omega)},
                 {"tol_g", cfg.tol_g},
                 {"max_iter", cfg.max_iter},
                 {"constraint_scale", to_string(cfg.scale)}};
  json groups = json::array();
  for (const auto& [l, g] : rule.groups().groups()) {
    const auto& d = rule.diagnostics().at(l);
    groups.push_back({{"l", l},
                      {"n", g.n},
                      {"n_s1", g.n_s1},
                      {"pi1", g.pi1},
                      {"pi0", g.pi0},
                      {"omega", rule.omegas().at(l)},
                      {"case", to_string(d.solve_case)},
                      {"stop", to_string(d.stop)},
                      {"g0", d.indicator_at_zero},
                      {"target", d.target},
                      {"residual", d.residual},
                      {"iterations", d.iterations},
                      {"doublings", d.doublings},
                      {"K", d.bracket}});
  }
  json j = {{"format", "fairidr.rule/1"},
            {"mode", to_string(rule.mode())},
            {"epsilon", cfg.epsilon},
            {"h", rule.bandwidth()},
            {"n_train", rule.groups().n_total()},
            {"solver", solver},
            {"groups", groups},
            {"cate", cate_json(rule.cate())}};
  return j.dump(1);
}

FairRule rule_from_json(const std::string& text) {
  const json j = parse_or_throw(text);
  try {
    if (j.at("format").get<std::string>() != "fairidr.rule/1") {
      throw ParseError("not a fairidr rule document");
    }
    SolverConfig cfg;
    cfg.epsilon = j.at("epsilon").get<double>();
    const json& s = j.at("solver");
    cfg.bandwidth = optional_from_json(s.at("bandwidth"));
    cfg.bracket = optional_from_json(s.at("K"));
    cfg.bracket_growth = s.at("bracket_growth").get<double>();
    cfg.max_bracket_doublings = s.at("max_bracket_doublings").get<int>();
    cfg.tol_omega = optional_from_json(s.at("tol_omega"));
    cfg.tol_g = s.at("tol_g").get<double>();
    cfg.max_iter = s.at("max_iter").get<int>();
    cfg.scale = constraint_scale_from_string(s.at("constraint_scale").get<std::string>());

    std::map<int, GroupStat> stats;
    std::map<int, double> omegas;
    std::map<int, SolveDiagnostics> diags;
    for (const json& g : j.at("groups")) {
      const int l = g.at("l").get<int>();
      GroupStat st;
      st.n = g.at("n").get<std::size_t>();
      st.n_s1 = g.at("n_s1").get<std::size_t>();
      st.pi1 = g.at("pi1").get<double>();
      st.pi0 = g.at("pi0").get<double>();
      stats.emplace(l, st);
      omegas.emplace(l, g.at("omega").get<double>());
      SolveDiagnostics d;
      d.solve_case = solve_case_from_string(g.at("case").get<std::string>());
      d.stop = stop_reason_from_string(g.at("stop").get<std::string>());
      d.indicator_at_zero = g.at("g0").get<double>();
      d.target = g.at("target").get<double>();
      d.residual = g.at("residual").get<double>();
      d.iterations = g.at("iterations").get<int>();
      d.doublings = g.at("doublings").get<int>();
      d.bracket = g.at("K").get<double>();
      diags.emplace(l, d);
    }
    return FairRule(cate_from(j.at("cate")),
                    GroupStats(std::move(stats), j.at("n_train").get<std::size_t>()),
                    std::move(omegas), std::move(diags), cfg,
                    fairness_mode_from_string(j.at("mode").get<std::string>()),
                    j.at("h").get<double>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid rule document: ") + e.what());
  }
}

void save_rule(const FairRule& rule, const std::filesystem::path& path) {
  const std::string text = rule_to_json(rule);
  write_file_atomic(path, [&](std::ostream& out) { out << text << '\n'; });
}

FairRule load_rule(const std::filesystem::path& path) { return rule_from_json(read_text(path)); }

void save_cate(const CateModel& cate, const std::filesystem::path& path) {
  const std::string text = cate_to_json(cate);
  write_file_atomic(path, [&](std::ostream& out) { out << text << '\n'; });
}

CateModel load_cate(const std::filesystem::path& path) { return cate_from_json(read_text(path)); }

}  // namespace fairidr
