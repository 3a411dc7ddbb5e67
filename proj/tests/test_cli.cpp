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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fairidr/serialize.hpp"
#include "fairidr/simgen.hpp"
#include "test_support.hpp"

namespace fairidr {
namespace {

using testing::TempDir;

struct RunResult {
  int status = -1;
  std::string err;
};

RunResult run_cli(const TempDir& dir, const std::string& args) {
  const auto err_path = dir / "stderr.txt";
  const std::string cmd = "cd '" + dir.path().string() + "' && '" FAIRIDR_CLI_PATH "' " + args +
                          " 2> '" + err_path.string() + "' > /dev/null";
  const int raw = std::system(cmd.c_str());
  RunResult res;
  res.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(err_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  res.err = ss.str();
  return res;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

const char* kFast = "--regressor ridge-basis --basis-degree 2";

TEST_CASE("usage errors exit 2 with a remedy line") {
  TempDir dir;
  for (const std::string args : {"", "fit", "frobnicate", "synth 9 out.csv",
                                 "gcurve m.json d.csv g.csv --omega 1:0", "synth 1 o.csv --n -4"}) {
    CAPTURE(args);
    const auto res = run_cli(dir, args);
    CHECK(res.status == 2);
    CHECK(res.err.find("remedy:") != std::string::npos);
  }
}

TEST_CASE("runtime errors exit 1 and name the error") {
  TempDir dir;
  auto res = run_cli(dir, "fit missing.csv m.json");
  CHECK(res.status == 1);
  CHECK(res.err.find("error: io-error:") != std::string::npos);

  write_text(dir / "bad.csv", "x1,s,l,a,r\n0.5,1,0,1,oops\n");
  res = run_cli(dir, "fit bad.csv m.json");
  CHECK(res.status == 1);
  CHECK(res.err.find("error: parse-error:") != std::string::npos);

  write_text(dir / "bad.scn", "case = 7\n");
  res = run_cli(dir, "simulate bad.scn");
  CHECK(res.status == 1);
  CHECK(res.err.find("error: config-error:") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir / "summary.csv"));
}

TEST_CASE("synth writes the requested generator output") {
  TempDir dir;
  REQUIRE(run_cli(dir, "synth 3 d.csv --n 50 --seed 9").status == 0);
  const Dataset got = load_csv(dir / "d.csv", {});
  const Dataset want = generate(3, 50, 9);
  REQUIRE(got.size() == want.size());
  REQUIRE(got.p() == want.p());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].r == want[i].r);
    CHECK(got[i].x == want[i].x);
    CHECK(got[i].l == want[i].l);
  }
}

TEST_CASE("fit, evaluate and gcurve agree with the saved rule") {
  TempDir dir;
  REQUIRE(run_cli(dir, "synth 4 train.csv --n 800 --seed 1").status == 0);
  REQUIRE(run_cli(dir, "synth 4 test.csv --n 500 --seed 2").status == 0);
  const auto fit = run_cli(dir, std::string("fit train.csv m.json --mode cdp --epsilon 0.05 ") +
                                    kFast + " --seed 11");
  REQUIRE(fit.status == 0);
  CHECK(fit.err.find("event=solve") != std::string::npos);

  const FairRule rule = load_rule(dir / "m.json");
  CHECK(rule.mode() == FairnessMode::kCdp);
  CHECK(rule.config().epsilon == 0.05);
  CHECK(rule.omegas().size() == 2);

  REQUIRE(run_cli(dir, "evaluate m.json test.csv report.csv --oracle-case 4").status == 0);
  const auto report = read_csv(dir / "report.csv");
  REQUIRE(report.size() == 2);
  CHECK(report[0][0] == "n_test");
  const Dataset test = load_csv(dir / "test.csv", {});
  const Decisions d = apply_rule(rule, test);
  const double pv = policy_value_true(d, test, case_oracle(4));
  const MetricsReport m = evaluate_decisions(d, test, pv);
  CHECK(report[1][0] == "500");
  CHECK(report[1][1] == format_metric(m.uf));
  CHECK(report[1][2] == format_metric(m.cuf));
  CHECK(report[1][3] == format_metric(pv));
  CHECK(report[1][4].empty());

  REQUIRE(run_cli(dir, "gcurve m.json train.csv g.csv --l 1 --omega -3:3:0.25").status == 0);
  const auto curve = read_csv(dir / "g.csv");
  REQUIRE(curve.size() == 26);
  CHECK(curve[0] == std::vector<std::string>{"omega", "g_hat", "g_indicator"});
  for (std::size_t i = 2; i < curve.size(); ++i) {
    CHECK(std::stod(curve[i][1]) <= std::stod(curve[i - 1][1]));
    CHECK(std::stod(curve[i][2]) <= std::stod(curve[i - 1][2]) + 1e-12);
  }
}

TEST_CASE("estimated policy value is reported on request") {
  TempDir dir;
  REQUIRE(run_cli(dir, "synth 1 train.csv --n 400 --seed 5").status == 0);
  REQUIRE(run_cli(dir, std::string("fit train.csv m.json --mode dp ") + kFast).status == 0);
  REQUIRE(run_cli(dir, std::string("evaluate m.json train.csv r.csv --with-estimated-pv ") + kFast)
              .status == 0);
  const auto report = read_csv(dir / "r.csv");
  REQUIRE(report.size() == 2);
  CHECK_FALSE(report[1][4].empty());
  CHECK(std::isfinite(std::stod(report[1][4])));
}

TEST_CASE("simulate and sweep write both tables; flags override the file") {
  TempDir dir;
  write_text(dir / "s.scn",
             "case = 1\nn = 300\nn_test = 200\nreplications = 3\nmode = dp\n"
             "regressor.kind = relu-net\nregressor.epochs = 2\n");
  std::filesystem::create_directories(dir / "out");
  REQUIRE(run_cli(dir, std::string("simulate s.scn out --replications 2 ") + kFast).status == 0);
  auto summary = read_csv(dir / "out" / "summary.csv");
  REQUIRE(summary.size() == 4);
  CHECK(summary[1].back() == "2");
  CHECK(read_csv(dir / "out" / "replications.csv").size() == 3);

  std::filesystem::create_directories(dir / "env");
  const std::string env = "FAIRIDR_OUT_DIR='" + (dir / "env").string() + "' ";
  const std::string cmd = "cd '" + dir.path().string() + "' && " + env + "'" FAIRIDR_CLI_PATH
                          "' -q sweep s.scn --epsilons 0.1,0 --replications 2 " + kFast +
                          " 2>/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  summary = read_csv(dir / "env" / "summary.csv");
  REQUIRE(summary.size() == 7);
  CHECK(std::stod(summary[1][2]) == 0.0);
  CHECK(std::stod(summary[4][2]) == 0.1);

  CHECK(run_cli(dir, "sweep s.scn --epsilons 0.1,x").status == 2);
}

TEST_CASE("jobs does not change simulation output") {
  TempDir dir;
  write_text(dir / "s.scn", "case = 1\nn = 200\nn_test = 100\nreplications = 3\n");
  std::filesystem::create_directories(dir / "a");
  std::filesystem::create_directories(dir / "b");
  REQUIRE(run_cli(dir, std::string("-j 1 simulate s.scn a ") + kFast).status == 0);
  REQUIRE(run_cli(dir, std::string("-j 3 simulate s.scn b ") + kFast).status == 0);
  CHECK(read_csv(dir / "a" / "replications.csv") == read_csv(dir / "b" / "replications.csv"));
}

TEST_CASE("shipped scenario files parse") {
  for (int c = 1; c <= 4; ++c) {
    const auto path =
        std::filesystem::path(FAIRIDR_SCENARIO_DIR) / ("case" + std::to_string(c) + ".cfg");
    const ScenarioSpec spec = load_scenario(path);
    CHECK(spec.case_id == c);
    CHECK(spec.mode == (c <= 2 ? FairnessMode::kDp : FairnessMode::kCdp));
    CHECK(spec.validate().empty());
  }
}

}  // namespace
}  // namespace fairidr
