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

#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fairidr/dataset.hpp"
#include "fairidr/error.hpp"
#include "test_support.hpp"

namespace fairidr {
namespace {

using testing::row;

std::vector<double> column_r(const Dataset& ds) {
  std::vector<double> out;
  for (const auto& smp : ds) out.push_back(smp.r);
  return out;
}

Dataset indexed(std::size_t n) {
  std::vector<Sample> rows;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back(row({0.0}, static_cast<int>(i % 2), 0, 1, static_cast<double>(i)));
  }
  return Dataset(std::move(rows), 1);
}

TEST_CASE("parse_csv reads a four-row file") {
  std::istringstream in(
      "x1,x2,s,l,a,r\n"
      "0.5,1,1,0,1,2.5\n"
      "-1,2,0,0,-1,0\n"
      "3,4,1,1,1,-1.25\n"
      "0,0,0,1,-1,7\n");
  const Dataset ds = parse_csv(in);
  CHECK(ds.size() == 4);
  CHECK(ds.p() == 2);
  CHECK(ds[0].x == std::vector<double>{0.5, 1.0});
  CHECK(ds[2].l == 1);
  CHECK(ds[1].a == -1);
  CHECK(ds[3].r == 7.0);
}

TEST_CASE("zero-one treatment coding is opt-in") {
  const std::string text = "x,s,l,a,r\n1,1,0,1,1\n2,0,0,0,1\n";
  CsvSchema schema;
  schema.treatment_zero_one = true;
  std::istringstream in(text);
  const Dataset ds = parse_csv(in, schema);
  CHECK(ds[0].a == 1);
  CHECK(ds[1].a == -1);

  std::istringstream raw(text);
  CHECK_THROWS_AS(parse_csv(raw), ValidationError);
}

TEST_CASE("missing column is a schema error naming the column") {
  std::istringstream in("x1,l,a,r\n1,0,1,1\n");
  try {
    parse_csv(in);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("'s'") != std::string::npos);
  }
}

TEST_CASE("bad cells are rejected") {
  std::istringstream text("x,s,l,a,r\n1,1,0,1,1\n1,0,0,-1,abc\n");
  try {
    parse_csv(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
  std::istringstream nan("x,s,l,a,r\nnan,1,0,1,1\n");
  CHECK_THROWS_AS(parse_csv(nan), ValidationError);
  std::istringstream inf("x,s,l,a,r\n1,1,0,1,inf\n");
  CHECK_THROWS_AS(parse_csv(inf), ValidationError);
  std::istringstream bad_s("x,s,l,a,r\n1,2,0,1,1\n");
  CHECK_THROWS_AS(parse_csv(bad_s), ValidationError);
}

TEST_CASE("explicit covariate columns select and order x") {
  std::istringstream in("b,a_arm,s,grp,y,c\n1,1,0,5,2,3\n");
  CsvSchema schema;
  schema.x_cols = {"c", "b"};
  schema.a_col = "a_arm";
  schema.l_col = "grp";
  schema.r_col = "y";
  const Dataset ds = parse_csv(in, schema);
  CHECK(ds.p() == 2);
  CHECK(ds[0].x == std::vector<double>{3.0, 1.0});
  CHECK(ds[0].l == 5);
  CHECK(ds[0].r == 2.0);
}

TEST_CASE("split sizes") {
  SplitSpec spec{0.8, 0.2, 7};
  const auto parts = split(indexed(10), spec);
  CHECK(parts.train.size() == 8);
  CHECK(parts.val.size() == 2);
  CHECK(parts.test.size() == 0);

  const auto ohie = split(indexed(1000), {0.72, 0.08, 3});
  CHECK(ohie.train.size() == 720);
  CHECK(ohie.val.size() == 80);
  CHECK(ohie.test.size() == 200);
}

TEST_CASE("split is deterministic in the seed") {
  const Dataset ds = indexed(50);
  const auto a = split(ds, {0.6, 0.2, 11});
  const auto b = split(ds, {0.6, 0.2, 11});
  const auto c = split(ds, {0.6, 0.2, 12});
  CHECK(column_r(a.train) == column_r(b.train));
  CHECK(column_r(a.val) == column_r(b.val));
  CHECK(column_r(a.test) == column_r(b.test));
  CHECK(column_r(a.train) != column_r(c.train));
}

TEST_CASE("split rejects impossible requests") {
  CHECK_THROWS_AS(split(indexed(10), {0.8, 0.3, 0}), SizingError);
  CHECK_THROWS_AS(split(Dataset({}, 1), {0.8, 0.2, 0}), SizingError);
  CHECK_THROWS_AS(split(indexed(3), {0.5, 0.2, 0}), SizingError);
}

TEST_CASE("split is a partition (property)") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> size(5, 400);
  std::uniform_real_distribution<double> frac(0.05, 0.6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = size(rng);
    const double train = frac(rng);
    const double val = std::min(frac(rng), 0.95 - train);
    const Dataset ds = indexed(n);
    DatasetSplit parts;
    try {
      parts = split(ds, {train, val, rng()});
    } catch (const SizingError&) {
      continue;  // a fraction rounds to an empty part
    }
    std::vector<double> all;
    for (const auto* part : {&parts.train, &parts.val, &parts.test}) {
      const auto r = column_r(*part);
      all.insert(all.end(), r.begin(), r.end());
    }
    std::sort(all.begin(), all.end());
    REQUIRE(all.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(all[i] == static_cast<double>(i));
  }
}

TEST_CASE("group_counts") {
  const Dataset ds({row({0}, 1, 0, 1, 0), row({0}, 0, 0, 1, 0), row({0}, 1, 1, 1, 0)}, 1);
  const auto counts = group_counts(ds);
  CHECK(counts.size() == 2);
  CHECK(counts.at(0) == GroupCount{2, 1, 1});
  CHECK(counts.at(1) == GroupCount{1, 1, 0});

  CHECK(group_counts(Dataset({}, 1)).empty());

  const auto single = group_counts(indexed(9));
  CHECK(single.size() == 1);
  CHECK(single.at(0).n == 9);
}

TEST_CASE("group_counts sums (property)") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset ds = testing::random_dataset(rng, 40 + trial, 2, 1 + trial % 4);
    std::size_t total = 0;
    for (const auto& [l, c] : group_counts(ds)) {
      CHECK(c.n == c.n_s1 + c.n_s0);
      total += c.n;
    }
    CHECK(total == ds.size());
  }
}

TEST_CASE("labels stay external, dense index is label-ordered") {
  const Dataset ds({row({0}, 1, 7, 1, 0), row({0}, 0, -3, 1, 0), row({0}, 1, 7, -1, 0)}, 1);
  CHECK(ds.group_labels() == std::vector<int>{-3, 7});
  const auto dense = ds.dense_group_index();
  CHECK(dense.at(-3) == 0);
  CHECK(dense.at(7) == 1);
  const Dataset flat = ds.with_constant_group();
  CHECK(flat.group_labels() == std::vector<int>{0});
}

TEST_CASE("csv round-trip is exact") {
  std::mt19937_64 rng(17);
  const Dataset ds = testing::random_dataset(rng, 64, 3, 3, 1.5);
  testing::TempDir dir;
  save_csv(ds, dir / "data.csv");
  const Dataset back = load_csv(dir / "data.csv");
  REQUIRE(back.size() == ds.size());
  REQUIRE(back.p() == ds.p());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back[i].x == ds[i].x);
    CHECK(back[i].s == ds[i].s);
    CHECK(back[i].l == ds[i].l);
    CHECK(back[i].a == ds[i].a);
    CHECK(back[i].r == ds[i].r);
  }
}

TEST_CASE("load_csv reports a missing file") {
  CHECK_THROWS_AS(load_csv("/nonexistent/fairidr.csv"), IoError);
}

}  // namespace
}  // namespace fairidr
