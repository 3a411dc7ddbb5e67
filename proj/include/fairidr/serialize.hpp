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

#ifndef FAIRIDR_SERIALIZE_HPP_
#define FAIRIDR_SERIALIZE_HPP_

// JSON documents for fitted models. Doubles are written with 17 significant
// digits, so loading a saved model reproduces every parameter bit-exactly.
//
// Regressor:
//   {"kind": "relu-net"|"ridge-basis", "width", "depth", "p", "B",
//    "input_dim", "basis_degree", "ridge_lambda", "train_loss", "val_loss",
//    "best_epoch",
//    relu-net:    "in_mean": [...], "in_scale": [...], "out_mean", "out_scale",
//                 "parameters": [W0, b0, W1, b1, ...]   (column-major W)
//    ridge-basis: "intercept", "coef": [...]}
// CATE model:  {"format": "fairidr.cate/1", "p", "m1": {...}, "m0": {...}}
// Fair rule:   {"format": "fairidr.rule/1", "mode", "epsilon", "h",
//               "solver": {...}, "cate": {...},
//               "groups": [{"l", "n", "n_s1", "pi1", "pi0", "omega", "case",
//                           "stop", "g0", "target", "residual",
//                           "iterations", "doublings", "K"}]}

#include <filesystem>
#include <string>

#include "fairidr/cate.hpp"
#include "fairidr/fairness.hpp"

namespace fairidr {

std::string cate_to_json(const CateModel& cate);
CateModel cate_from_json(const std::string& text);

std::string rule_to_json(const FairRule& rule);
FairRule rule_from_json(const std::string& text);

void save_rule(const FairRule& rule, const std::filesystem::path& path);
FairRule load_rule(const std::filesystem::path& path);
void save_cate(const CateModel& cate, const std::filesystem::path& path);
CateModel load_cate(const std::filesystem::path& path);

}  // namespace fairidr

#endif  // FAIRIDR_SERIALIZE_HPP_
