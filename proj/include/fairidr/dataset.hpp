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

#ifndef FAIRIDR_DATASET_HPP_
#define FAIRIDR_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fairidr {

/// One observation (X, S, L, A, R). `s` is the binary sensitive attribute,
/// `l` the legitimate-group label (any integer; labels are kept as given),
/// `a` the treatment in {-1, +1} and `r` the observed reward.
struct Sample {
  std::vector<double> x;
  int s = 0;
  int l = 0;
  int a = 1;
  double r = 0.0;
};

/// Immutable, validated collection of samples sharing one covariate
/// dimension. Cheap to copy relative to model fitting; safe to share
/// between threads.
class Dataset {
 public:
  Dataset() = default;
  /// Validates every sample; throws ValidationError on the first bad row.
  /// `p` is required when `samples` is empty, otherwise it is inferred.
  explicit Dataset(std::vector<Sample> samples, std::size_t p = 0);

  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t p() const noexcept { return p_; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  std::span<const Sample> samples() const noexcept { return samples_; }
  auto begin() const noexcept { return samples_.begin(); }
  auto end() const noexcept { return samples_.end(); }

  /// Rows at `indices`, in that order.
  Dataset subset(std::span<const std::size_t> indices) const;
  /// Copy with every L replaced by `label` (DP treats L as one group).
  Dataset with_constant_group(int label = 0) const;

  std::size_t count_arm(int a) const;
  /// Sorted distinct L labels.
  std::vector<int> group_labels() const;
  /// External label -> dense index 0..|L|-1, in label order.
  std::map<int, std::size_t> dense_group_index() const;

 private:
  std::vector<Sample> samples_;
  std::size_t p_ = 0;
};

struct SplitSpec {
  double train_frac = 0.8;
  double val_frac = 0.2;
  std::uint64_t seed = 0;
};

struct DatasetSplit {
  Dataset train;
  Dataset val;
  Dataset test;
};

/// Seeded uniform shuffle followed by contiguous slicing into
/// floor(train_frac*n), floor(val_frac*n) and the remainder.
DatasetSplit split(const Dataset& ds, const SplitSpec& spec);

struct GroupCount {
  std::size_t n = 0;
  std::size_t n_s1 = 0;
  std::size_t n_s0 = 0;
  bool operator==(const GroupCount&) const = default;
};

std::map<int, GroupCount> group_counts(const Dataset& ds);

/// Column mapping for CSV ingestion. An empty `x_cols` means "every column
/// not named as s, l, a or r", in file order.
struct CsvSchema {
  std::vector<std::string> x_cols;
  std::string s_col = "s";
  std::string l_col = "l";
  std::string a_col = "a";
  std::string r_col = "r";
  /// Treatment column is coded {0,1}; 0 maps to -1. Never inferred.
  bool treatment_zero_one = false;
};

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
Dataset parse_csv(std::istream& in, const CsvSchema& schema = {});

/// Writes x1..xp,s,l,a,r with 17 significant digits (round-trips exactly).
void save_csv(const Dataset& ds, const std::filesystem::path& path);
void write_csv(const Dataset& ds, std::ostream& out);

}  // namespace fairidr

#endif  // FAIRIDR_DATASET_HPP_
