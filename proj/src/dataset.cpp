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

#include "fairidr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "fairidr/atomic_file.hpp"
#include "fairidr/error.hpp"

namespace fairidr {

namespace {

void validate_sample(const Sample& smp, std::size_t p, std::size_t row) {
  auto fail = [row](const std::string& msg) {
    throw ValidationError("row " + std::to_string(row) + ": " + msg);
  };
  if (smp.x.size() != p) {
    fail("covariate length " + std::to_string(smp.x.size()) + " != p=" + std::to_string(p));
  }
  if (smp.s != 0 && smp.s != 1) fail("s must be 0 or 1, got " + std::to_string(smp.s));
  if (smp.a != -1 && smp.a != 1) fail("a must be -1 or +1, got " + std::to_string(smp.a));
  if (!std::isfinite(smp.r)) fail("non-finite outcome r");
  for (double v : smp.x) {
    if (!std::isfinite(v)) fail("non-finite covariate");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim whitespace and a trailing CR
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    throw ParseError("row " + std::to_string(row) + ", column '" + col +
                     "': non-numeric cell '" + cell + "'");
  }
  if (!std::isfinite(v)) {
    throw ValidationError("row " + std::to_string(row) + ", column '" + col +
                          "': NaN/Inf not allowed");
  }
  return v;
}

int parse_integral(const std::string& cell, std::size_t row, const std::string& col) {
  double v = parse_number(cell, row, col);
  if (v != std::floor(v)) {
    throw ValidationError("row " + std::to_string(row) + ", column '" + col +
                          "': expected an integer, got '" + cell + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

Dataset::Dataset(std::vector<Sample> samples, std::size_t p)
    : samples_(std::move(samples)), p_(p) {
  if (!samples_.empty() && p_ == 0) p_ = samples_.front().x.size();
  for (std::size_t i = 0; i < samples_.size(); ++i) validate_sample(samples_[i], p_, i);
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<Sample> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(samples_.at(i));
  return Dataset(std::move(out), p_);
}

Dataset Dataset::with_constant_group(int label) const {
  std::vector<Sample> out(samples_);
  for (auto& smp : out) smp.l = label;
  return Dataset(std::move(out), p_);
}

std::size_t Dataset::count_arm(int a) const {
  return static_cast<std::size_t>(
      std::count_if(samples_.begin(), samples_.end(), [a](const Sample& s) { return s.a == a; }));
}

std::vector<int> Dataset::group_labels() const {
  std::set<int> labels;
  for (const auto& s : samples_) labels.insert(s.l);
  return {labels.begin(), labels.end()};
}

std::map<int, std::size_t> Dataset::dense_group_index() const {
  std::map<int, std::size_t> index;
  for (int l : group_labels()) index.emplace(l, index.size());
  return index;
}

DatasetSplit split(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.train_frac > 0.0 && spec.train_frac < 1.0) ||
      !(spec.val_frac >= 0.0 && spec.val_frac < 1.0) ||
      spec.train_frac + spec.val_frac > 1.0 + 1e-12) {
    throw SizingError("invalid split fractions");
  }
  if (ds.empty()) throw SizingError("cannot split an empty dataset");
  const std::size_t n = ds.size();
  const auto n_train = static_cast<std::size_t>(std::floor(spec.train_frac * n + 1e-9));
  const auto n_val = static_cast<std::size_t>(std::floor(spec.val_frac * n + 1e-9));
  const std::size_t n_test = n - std::min(n, n_train + n_val);
  const double test_frac = 1.0 - spec.train_frac - spec.val_frac;
  if (n_train == 0 || (spec.val_frac > 0.0 && n_val == 0) ||
      (test_frac > 1e-9 && n_test == 0)) {
    throw SizingError("n=" + std::to_string(n) + " is too small for the requested split");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::span<const std::size_t> all(order);
  return {ds.subset(all.subspan(0, n_train)), ds.subset(all.subspan(n_train, n_val)),
          ds.subset(all.subspan(n_train + n_val))};
}

std::map<int, GroupCount> group_counts(const Dataset& ds) {
  std::map<int, GroupCount> out;
  for (const auto& smp : ds) {
    auto& c = out[smp.l];
    ++c.n;
    (smp.s == 1 ? c.n_s1 : c.n_s0) += 1;
  }
  return out;
}

Dataset parse_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("missing header row");
  const auto header = split_csv_line(line);

  auto find_col = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t s_idx = find_col(schema.s_col);
  const std::size_t l_idx = find_col(schema.l_col);
  const std::size_t a_idx = find_col(schema.a_col);
  const std::size_t r_idx = find_col(schema.r_col);

  std::vector<std::size_t> x_idx;
  if (schema.x_cols.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j != s_idx && j != l_idx && j != a_idx && j != r_idx) x_idx.push_back(j);
    }
  } else {
    for (const auto& c : schema.x_cols) x_idx.push_back(find_col(c));
  }
  if (x_idx.empty()) throw SchemaError("no covariate columns");

  std::vector<Sample> rows;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    Sample smp;
    smp.x.reserve(x_idx.size());
    for (std::size_t j : x_idx) smp.x.push_back(parse_number(cells[j], row, header[j]));
    smp.s = parse_integral(cells[s_idx], row, header[s_idx]);
    smp.l = parse_integral(cells[l_idx], row, header[l_idx]);
    int a = parse_integral(cells[a_idx], row, header[a_idx]);
    if (schema.treatment_zero_one) {
      if (a != 0 && a != 1) {
        throw ValidationError("row " + std::to_string(row) + ": treatment must be 0/1");
      }
      a = a == 1 ? 1 : -1;
    }
    smp.a = a;
    smp.r = parse_number(cells[r_idx], row, header[r_idx]);
    validate_sample(smp, x_idx.size(), row);
    rows.push_back(std::move(smp));
    ++row;
  }
  return Dataset(std::move(rows), x_idx.size());
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_csv(in, schema);
}

void write_csv(const Dataset& ds, std::ostream& out) {
  for (std::size_t j = 0; j < ds.p(); ++j) out << 'x' << (j + 1) << ',';
  out << "s,l,a,r\n";
  out << std::setprecision(17);
  for (const auto& smp : ds) {
    for (double v : smp.x) out << v << ',';
    out << smp.s << ',' << smp.l << ',' << smp.a << ',' << smp.r << '\n';
  }
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  write_file_atomic(path, [&](std::ostream& out) { write_csv(ds, out); });
}

}  // namespace fairidr
