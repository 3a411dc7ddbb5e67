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

#ifndef FAIRIDR_CATE_HPP_
#define FAIRIDR_CATE_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairidr/dataset.hpp"

namespace fairidr {

enum class RegressorKind { kReluNet, kRidgeBasis };

std::string to_string(RegressorKind kind);
RegressorKind regressor_kind_from_string(const std::string& name);

/// Hyperparameters for one outcome regressor. Fields that do not apply to
/// `kind` are ignored.
struct RegressorSpec {
  RegressorKind kind = RegressorKind::kReluNet;
  int width = 64;
  int depth = 3;
  /// Sup-norm bound on predictions; unset means 10 * sd(r) of the arm.
  std::optional<double> output_clip;
  double learning_rate = 1e-3;
  int epochs = 200;
  int batch_size = 64;
  double ridge_lambda = 0.0;
  int basis_degree = 1;
  std::uint64_t seed = 0;
};

/// Regressor input z = (x, s, l) laid out column-per-sample.
Eigen::MatrixXd feature_matrix(const Dataset& ds);
Eigen::VectorXd feature_vector(std::span<const double> x, int s, int l);

/// Fully connected ReLU network: `depth` hidden layers of `width` units and a
/// scalar linear output. Operates on standardized inputs; the caller owns
/// scaling and clipping.
class ReluNetwork {
 public:
  ReluNetwork() = default;
  ReluNetwork(int input_dim, int width, int depth, std::uint64_t seed);

  /// One output per column of `inputs`.
  Eigen::RowVectorXd forward(const Eigen::MatrixXd& inputs) const;

  /// Mean squared error over the columns of `inputs`; when `grad` is given it
  /// receives d(loss)/d(parameters) in `parameters()` order.
  double loss(const Eigen::MatrixXd& inputs, const Eigen::RowVectorXd& targets,
              std::vector<double>* grad = nullptr) const;

  /// Backpropagation into per-layer buffers (resized as needed); returns the
  /// same loss as `loss`.
  double gradient(const Eigen::MatrixXd& inputs, const Eigen::RowVectorXd& targets,
                  std::vector<Eigen::MatrixXd>& dw, std::vector<Eigen::VectorXd>& db) const;

  std::size_t parameter_count() const;
  /// Flattened as W0, b0, W1, b1, ... with column-major weights.
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> flat);

  int input_dim() const { return input_dim_; }
  int width() const { return width_; }
  int depth() const { return depth_; }

 private:
  int input_dim_ = 0;
  int width_ = 0;
  int depth_ = 0;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
};

/// A fitted outcome model m(z); predictions are clipped to [-clip, clip].
class FittedRegressor {
 public:
  /// Hand-built affine model m(z) = intercept + coef . z, clipped to
  /// [-clip, clip]; behaves as a degree-1 ridge-basis fit.
  static FittedRegressor affine(double intercept, std::vector<double> coef, double clip);

  double predict(const Eigen::VectorXd& z) const;
  /// One prediction per column of `features`.
  Eigen::VectorXd predict(const Eigen::MatrixXd& features) const;

  const RegressorSpec& spec() const { return spec_; }
  double clip() const { return clip_; }
  double train_loss() const { return train_loss_; }
  double val_loss() const { return val_loss_; }
  int best_epoch() const { return best_epoch_; }
  int input_dim() const { return input_dim_; }

  /// Ridge-basis only: intercept followed by one coefficient per basis
  /// column (feature j power k, j-major), expressed on the raw scale.
  /// Columns dropped as constant carry 0.
  std::vector<double> basis_coefficients() const;

 private:
  friend FittedRegressor fit_regressor(const Eigen::MatrixXd&, const Eigen::VectorXd&,
                                       const Eigen::MatrixXd&, const Eigen::VectorXd&,
                                       const RegressorSpec&);
  friend struct RegressorCodec;

  Eigen::MatrixXd basis(const Eigen::MatrixXd& features) const;

  RegressorSpec spec_;
  int input_dim_ = 0;
  double clip_ = 0.0;
  double train_loss_ = 0.0;
  double val_loss_ = 0.0;
  int best_epoch_ = -1;
  // relu-net: input/target standardization
  Eigen::VectorXd in_mean_;
  Eigen::VectorXd in_scale_;
  double out_mean_ = 0.0;
  double out_scale_ = 1.0;
  ReluNetwork net_;
  // ridge-basis: raw-scale coefficients
  double intercept_ = 0.0;
  Eigen::VectorXd coef_;
};

/// Minimizes empirical MSE. ridge-basis: exact penalized least squares on an
/// additive polynomial basis (intercept unpenalized). relu-net: seeded
/// mini-batch Adam, keeping the epoch with the lowest validation MSE.
FittedRegressor fit_regressor(const Eigen::MatrixXd& train_features,
                              const Eigen::VectorXd& train_targets,
                              const Eigen::MatrixXd& val_features,
                              const Eigen::VectorXd& val_targets, const RegressorSpec& spec);

/// Fits on the rows of `train` (and `val`) with treatment `arm`.
FittedRegressor fit_regressor(const Dataset& train, const Dataset& val, int arm,
                              const RegressorSpec& spec);

/// Two-model CATE estimate delta(z) = m1(z) - m0(z).
class CateModel {
 public:
  CateModel() = default;
  CateModel(FittedRegressor m1, FittedRegressor m0, std::size_t p);

  double predict(std::span<const double> x, int s, int l) const;
  /// delta for every row of `ds`.
  std::vector<double> predict(const Dataset& ds) const;
  /// Per-row (m1, m0) predictions for every row of `ds`.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> predict_arms(const Dataset& ds) const;

  const FittedRegressor& treated() const { return m1_; }
  const FittedRegressor& control() const { return m0_; }
  std::size_t p() const { return p_; }

 private:
  FittedRegressor m1_;
  FittedRegressor m0_;
  std::size_t p_ = 0;
};

/// m1 on rows with A=+1, m0 on rows with A=-1. Throws ArmMissingError when an
/// arm has no training rows.
CateModel fit_cate(const Dataset& train, const Dataset& val, const RegressorSpec& spec);

}  // namespace fairidr

#endif  // FAIRIDR_CATE_HPP_
