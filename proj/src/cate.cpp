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

#include "fairidr/cate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fairidr/error.hpp"

namespace fairidr {

std::string to_string(RegressorKind kind) {
  return kind == RegressorKind::kReluNet ? "relu-net" : "ridge-basis";
}

RegressorKind regressor_kind_from_string(const std::string& name) {
  if (name == "relu-net") return RegressorKind::kReluNet;
  if (name == "ridge-basis") return RegressorKind::kRidgeBasis;
  throw ConfigError("unknown regressor kind '" + name + "'");
}

Eigen::MatrixXd feature_matrix(const Dataset& ds) {
  const auto q = static_cast<Eigen::Index>(ds.p() + 2);
  Eigen::MatrixXd out(q, static_cast<Eigen::Index>(ds.size()));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& smp = ds[i];
    const auto col = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < smp.x.size(); ++j) {
      out(static_cast<Eigen::Index>(j), col) = smp.x[j];
    }
    out(q - 2, col) = smp.s;
    out(q - 1, col) = smp.l;
  }
  return out;
}

Eigen::VectorXd feature_vector(std::span<const double> x, int s, int l) {
  Eigen::VectorXd z(static_cast<Eigen::Index>(x.size() + 2));
  for (std::size_t j = 0; j < x.size(); ++j) z(static_cast<Eigen::Index>(j)) = x[j];
  z(z.size() - 2) = s;
  z(z.size() - 1) = l;
  return z;
}

// ---------------------------------------------------------------------------
// ReluNetwork

ReluNetwork::ReluNetwork(int input_dim, int width, int depth, std::uint64_t seed)
    : input_dim_(input_dim), width_(width), depth_(depth) {
  if (input_dim < 1 || width < 1 || depth < 1) {
    throw ConfigError("relu-net needs input_dim, width and depth >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  int fan_in = input_dim;
  for (int layer = 0; layer <= depth; ++layer) {
    const int fan_out = layer == depth ? 1 : width;
    // He initialization for ReLU layers, Glorot-like for the linear head.
    const double sd = layer == depth ? std::sqrt(1.0 / fan_in) : std::sqrt(2.0 / fan_in);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = sd * normal(rng);
    }
    weights_.push_back(std::move(w));
    biases_.push_back(Eigen::VectorXd::Zero(fan_out));
    fan_in = fan_out;
  }
}

Eigen::RowVectorXd ReluNetwork::forward(const Eigen::MatrixXd& inputs) const {
  Eigen::MatrixXd a = inputs;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    Eigen::MatrixXd z = (weights_[k] * a).colwise() + biases_[k];
    if (k + 1 < weights_.size()) {
      a = z.cwiseMax(0.0);
    } else {
      a = std::move(z);
    }
  }
  return a.row(0);
}

double ReluNetwork::gradient(const Eigen::MatrixXd& inputs, const Eigen::RowVectorXd& targets,
                             std::vector<Eigen::MatrixXd>& dw,
                             std::vector<Eigen::VectorXd>& db) const {
  const std::size_t layers = weights_.size();
  const double m = static_cast<double>(inputs.cols());
  std::vector<Eigen::MatrixXd> acts;  // acts[k] is the input to layer k
  acts.reserve(layers);
  acts.push_back(inputs);
  Eigen::MatrixXd out;
  for (std::size_t k = 0; k < layers; ++k) {
    Eigen::MatrixXd z = (weights_[k] * acts.back()).colwise() + biases_[k];
    if (k + 1 < layers) {
      acts.push_back(z.cwiseMax(0.0));
    } else {
      out = std::move(z);
    }
  }
  const Eigen::RowVectorXd resid = out.row(0) - targets;
  const double loss = resid.squaredNorm() / m;

  dw.resize(layers);
  db.resize(layers);
  Eigen::MatrixXd delta = (2.0 / m) * resid;  // 1 x m
  for (std::size_t k = layers; k-- > 0;) {
    dw[k].noalias() = delta * acts[k].transpose();
    db[k] = delta.rowwise().sum();
    if (k == 0) break;
    Eigen::MatrixXd back = weights_[k].transpose() * delta;
    // ReLU derivative: acts[k] > 0 exactly where the pre-activation was.
    delta = back.cwiseProduct((acts[k].array() > 0.0).cast<double>().matrix());
  }
  return loss;
}

double ReluNetwork::loss(const Eigen::MatrixXd& inputs, const Eigen::RowVectorXd& targets,
                         std::vector<double>* grad) const {
  if (grad == nullptr) {
    return (forward(inputs) - targets).squaredNorm() / static_cast<double>(inputs.cols());
  }
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::VectorXd> db;
  const double value = gradient(inputs, targets, dw, db);
  grad->clear();
  grad->reserve(parameter_count());
  for (std::size_t k = 0; k < dw.size(); ++k) {
    grad->insert(grad->end(), dw[k].data(), dw[k].data() + dw[k].size());
    grad->insert(grad->end(), db[k].data(), db[k].data() + db[k].size());
  }
  return value;
}

std::size_t ReluNetwork::parameter_count() const {
  std::size_t count = 0;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    count += static_cast<std::size_t>(weights_[k].size() + biases_[k].size());
  }
  return count;
}

std::vector<double> ReluNetwork::parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    flat.insert(flat.end(), weights_[k].data(), weights_[k].data() + weights_[k].size());
    flat.insert(flat.end(), biases_[k].data(), biases_[k].data() + biases_[k].size());
  }
  return flat;
}

void ReluNetwork::set_parameters(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    throw ShapeError("parameter block has " + std::to_string(flat.size()) + " values, expected " +
                     std::to_string(parameter_count()));
  }
  std::size_t at = 0;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    std::copy_n(flat.begin() + at, weights_[k].size(), weights_[k].data());
    at += static_cast<std::size_t>(weights_[k].size());
    std::copy_n(flat.begin() + at, biases_[k].size(), biases_[k].data());
    at += static_cast<std::size_t>(biases_[k].size());
  }
}

// ---------------------------------------------------------------------------
// FittedRegressor

namespace {

double mean_of(const Eigen::VectorXd& v) { return v.size() ? v.mean() : 0.0; }

double sd_of(const Eigen::VectorXd& v) {
  if (v.size() < 2) return 0.0;
  const double mu = v.mean();
  return std::sqrt((v.array() - mu).square().sum() / static_cast<double>(v.size() - 1));
}

double default_clip(const Eigen::VectorXd& targets) {
  const double sd = sd_of(targets);
  if (sd > 0.0) return 10.0 * sd;
  return 10.0 * std::max(1.0, std::abs(mean_of(targets)));
}

double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& targets) {
  return (pred - targets).squaredNorm() / static_cast<double>(targets.size());
}

}  // namespace

Eigen::MatrixXd FittedRegressor::basis(const Eigen::MatrixXd& features) const {
  const int degree = spec_.basis_degree;
  Eigen::MatrixXd out(features.rows() * degree, features.cols());
  for (Eigen::Index j = 0; j < features.rows(); ++j) {
    Eigen::RowVectorXd power = features.row(j);
    for (int k = 0; k < degree; ++k) {
      out.row(j * degree + k) = power;
      power = power.cwiseProduct(features.row(j));
    }
  }
  return out;
}

FittedRegressor FittedRegressor::affine(double intercept, std::vector<double> coef, double clip) {
  if (!(clip > 0.0)) throw ConfigError("clip must be > 0");
  FittedRegressor reg;
  reg.spec_.kind = RegressorKind::kRidgeBasis;
  reg.spec_.basis_degree = 1;
  reg.spec_.output_clip = clip;
  reg.input_dim_ = static_cast<int>(coef.size());
  reg.clip_ = clip;
  reg.intercept_ = intercept;
  reg.coef_ =
      Eigen::Map<const Eigen::VectorXd>(coef.data(), static_cast<Eigen::Index>(coef.size()));
  reg.best_epoch_ = 0;
  return reg;
}

double FittedRegressor::predict(const Eigen::VectorXd& z) const {
  return predict(Eigen::MatrixXd(z))(0);
}

Eigen::VectorXd FittedRegressor::predict(const Eigen::MatrixXd& features) const {
  if (features.rows() != input_dim_) {
    throw ShapeError("regressor expects " + std::to_string(input_dim_) + " inputs, got " +
                     std::to_string(features.rows()));
  }
  Eigen::VectorXd raw;
  if (spec_.kind == RegressorKind::kRidgeBasis) {
    raw = (coef_.transpose() * basis(features)).transpose();
    raw.array() += intercept_;
  } else {
    Eigen::MatrixXd scaled =
        (features.colwise() - in_mean_).array().colwise() / in_scale_.array();
    raw = (net_.forward(scaled).array() * out_scale_ + out_mean_).transpose();
  }
  return raw.cwiseMax(-clip_).cwiseMin(clip_);
}

std::vector<double> FittedRegressor::basis_coefficients() const {
  std::vector<double> out{intercept_};
  out.insert(out.end(), coef_.data(), coef_.data() + coef_.size());
  return out;
}

namespace {

// Penalty applies to coefficients of the standardized basis. Constant
// columns, and powers that repeat a lower power of the same feature (x^2 = x
// for a 0/1 feature), are dropped and get a zero coefficient.
void fit_ridge(const Eigen::MatrixXd& basis, int degree, const Eigen::VectorXd& y,
               double lambda, double& intercept, Eigen::VectorXd& coef) {
  const Eigen::Index k = basis.rows();
  const auto m = static_cast<double>(basis.cols());
  Eigen::VectorXd mu = basis.rowwise().mean();
  Eigen::VectorXd scale(k);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double var = (basis.row(j).array() - mu(j)).square().sum() / m;
    scale(j) = std::sqrt(var);
    if (!(scale(j) > 1e-12 * (1.0 + std::abs(mu(j))))) continue;
    bool repeat = false;
    for (Eigen::Index prev = j - j % degree; prev < j && !repeat; ++prev) {
      if (std::find(kept.begin(), kept.end(), prev) == kept.end()) continue;
      repeat = ((basis.row(j).array() - mu(j)) / scale(j) -
                (basis.row(prev).array() - mu(prev)) / scale(prev))
                   .abs()
                   .maxCoeff() <= 1e-12;
    }
    if (!repeat) kept.push_back(j);
  }
  const double y_mean = y.mean();
  coef = Eigen::VectorXd::Zero(k);
  if (!kept.empty()) {
    const auto kk = static_cast<Eigen::Index>(kept.size());
    Eigen::MatrixXd zs(kk, basis.cols());
    for (Eigen::Index t = 0; t < kk; ++t) {
      const Eigen::Index j = kept[static_cast<std::size_t>(t)];
      zs.row(t) = (basis.row(j).array() - mu(j)) / scale(j);
    }
    Eigen::MatrixXd gram = zs * zs.transpose() / m;
    gram.diagonal().array() += lambda;
    Eigen::VectorXd rhs = zs * (y.array() - y_mean).matrix() / m;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gram);
    qr.setThreshold(1e-12);
    if (qr.rank() < kk) {
      throw NumericalError("singular ridge system (rank " + std::to_string(qr.rank()) + " of " +
                           std::to_string(kk) + ")");
    }
    Eigen::VectorXd beta = qr.solve(rhs);
    for (Eigen::Index t = 0; t < kk; ++t) {
      const Eigen::Index j = kept[static_cast<std::size_t>(t)];
      coef(j) = beta(t) / scale(j);
    }
  }
  intercept = y_mean - coef.dot(mu);
}

}  // namespace

FittedRegressor fit_regressor(const Eigen::MatrixXd& train_features,
                              const Eigen::VectorXd& train_targets,
                              const Eigen::MatrixXd& val_features,
                              const Eigen::VectorXd& val_targets, const RegressorSpec& spec) {
  if (train_features.cols() == 0) throw ArmMissingError("empty training set for regressor");
  if (train_features.cols() != train_targets.size() || val_features.cols() != val_targets.size()) {
    throw ShapeError("feature/target size mismatch");
  }
  if (spec.width < 1 || spec.depth < 1 || spec.basis_degree < 1 || spec.epochs < 1 ||
      spec.batch_size < 1 || spec.ridge_lambda < 0.0 || !(spec.learning_rate > 0.0)) {
    throw ConfigError("invalid regressor spec");
  }
  if (spec.output_clip && !(*spec.output_clip > 0.0)) throw ConfigError("output_clip must be > 0");

  FittedRegressor reg;
  reg.spec_ = spec;
  reg.input_dim_ = static_cast<int>(train_features.rows());
  reg.clip_ = spec.output_clip.value_or(default_clip(train_targets));
  const bool has_val = val_features.cols() > 0;

  if (spec.kind == RegressorKind::kRidgeBasis) {
    fit_ridge(reg.basis(train_features), spec.basis_degree, train_targets, spec.ridge_lambda,
              reg.intercept_, reg.coef_);
    reg.train_loss_ = mse(reg.predict(train_features), train_targets);
    reg.val_loss_ = has_val ? mse(reg.predict(val_features), val_targets) : reg.train_loss_;
    reg.best_epoch_ = 0;
    return reg;
  }

  const Eigen::Index q = train_features.rows();
  const Eigen::Index m = train_features.cols();
  reg.in_mean_ = train_features.rowwise().mean();
  reg.in_scale_.resize(q);
  for (Eigen::Index j = 0; j < q; ++j) {
    const double sd = sd_of(train_features.row(j).transpose());
    reg.in_scale_(j) = sd > 1e-12 ? sd : 1.0;
  }
  reg.out_mean_ = mean_of(train_targets);
  const double y_sd = sd_of(train_targets);
  reg.out_scale_ = y_sd > 1e-12 ? y_sd : 1.0;

  const Eigen::MatrixXd xs =
      (train_features.colwise() - reg.in_mean_).array().colwise() / reg.in_scale_.array();
  const Eigen::RowVectorXd ys =
      ((train_targets.array() - reg.out_mean_) / reg.out_scale_).matrix().transpose();

  std::mt19937_64 rng(spec.seed);
  reg.net_ = ReluNetwork(static_cast<int>(q), spec.width, spec.depth, rng());

  // Adam state, layer by layer.
  std::vector<double> params = reg.net_.parameters();
  std::vector<double> m1(params.size(), 0.0);
  std::vector<double> m2(params.size(), 0.0);
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  long step = 0;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::Index batch = std::min<Eigen::Index>(spec.batch_size, m);

  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> best_params = params;
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::VectorXd> db;
  Eigen::MatrixXd bx(q, batch);
  Eigen::RowVectorXd by(batch);

  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < m; start += batch) {
      const Eigen::Index len = std::min(batch, m - start);
      bx.resize(q, len);
      by.resize(len);
      for (Eigen::Index t = 0; t < len; ++t) {
        const Eigen::Index src = order[static_cast<std::size_t>(start + t)];
        bx.col(t) = xs.col(src);
        by(t) = ys(src);
      }
      const double batch_loss = reg.net_.gradient(bx, by, dw, db);
      if (!std::isfinite(batch_loss)) {
        throw DivergenceError("relu-net loss became non-finite at epoch " + std::to_string(epoch));
      }
      ++step;
      const double corr1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double corr2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      std::size_t at = 0;
      auto update = [&](const double* g, Eigen::Index count) {
        for (Eigen::Index t = 0; t < count; ++t, ++at) {
          m1[at] = kBeta1 * m1[at] + (1.0 - kBeta1) * g[t];
          m2[at] = kBeta2 * m2[at] + (1.0 - kBeta2) * g[t] * g[t];
          params[at] -= spec.learning_rate * (m1[at] / corr1) / (std::sqrt(m2[at] / corr2) + kEps);
        }
      };
      for (std::size_t k = 0; k < dw.size(); ++k) {
        update(dw[k].data(), dw[k].size());
        update(db[k].data(), db[k].size());
      }
      reg.net_.set_parameters(params);
    }

    const double epoch_val = has_val ? mse(reg.predict(val_features), val_targets)
                                     : mse(reg.predict(train_features), train_targets);
    if (!std::isfinite(epoch_val)) {
      throw DivergenceError("relu-net validation loss became non-finite at epoch " +
                            std::to_string(epoch));
    }
    if (epoch_val < best_val) {
      best_val = epoch_val;
      best_params = params;
      reg.best_epoch_ = epoch;
    }
  }

  reg.net_.set_parameters(best_params);
  reg.val_loss_ = best_val;
  reg.train_loss_ = mse(reg.predict(train_features), train_targets);
  return reg;
}

namespace {

std::pair<Eigen::MatrixXd, Eigen::VectorXd> arm_view(const Dataset& ds, int arm) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds[i].a == arm) rows.push_back(i);
  }
  const Dataset sub = ds.subset(rows);
  Eigen::VectorXd y(static_cast<Eigen::Index>(sub.size()));
  for (std::size_t i = 0; i < sub.size(); ++i) y(static_cast<Eigen::Index>(i)) = sub[i].r;
  Eigen::MatrixXd features = feature_matrix(sub);
  if (sub.empty()) features.resize(static_cast<Eigen::Index>(ds.p() + 2), 0);
  return {std::move(features), std::move(y)};
}

}  // namespace

FittedRegressor fit_regressor(const Dataset& train, const Dataset& val, int arm,
                              const RegressorSpec& spec) {
  auto [tx, ty] = arm_view(train, arm);
  auto [vx, vy] = arm_view(val, arm);
  if (ty.size() == 0) {
    throw ArmMissingError("no training rows with A=" + std::to_string(arm));
  }
  return fit_regressor(tx, ty, vx, vy, spec);
}

// ---------------------------------------------------------------------------
// CateModel

CateModel::CateModel(FittedRegressor m1, FittedRegressor m0, std::size_t p)
    : m1_(std::move(m1)), m0_(std::move(m0)), p_(p) {
  if (m1_.input_dim() != m0_.input_dim() || m1_.input_dim() != static_cast<int>(p + 2)) {
    throw ShapeError("arm regressors disagree on input layout");
  }
}

double CateModel::predict(std::span<const double> x, int s, int l) const {
  if (x.size() != p_) {
    throw ShapeError("covariate length " + std::to_string(x.size()) + " != p=" +
                     std::to_string(p_));
  }
  const Eigen::VectorXd z = feature_vector(x, s, l);
  return m1_.predict(z) - m0_.predict(z);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> CateModel::predict_arms(const Dataset& ds) const {
  if (ds.p() != p_ && !ds.empty()) {
    throw ShapeError("dataset has p=" + std::to_string(ds.p()) + ", model expects " +
                     std::to_string(p_));
  }
  const Eigen::MatrixXd features = feature_matrix(ds);
  return {m1_.predict(features), m0_.predict(features)};
}

std::vector<double> CateModel::predict(const Dataset& ds) const {
  auto [treated, control] = predict_arms(ds);
  std::vector<double> out(ds.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = treated(static_cast<Eigen::Index>(i)) - control(static_cast<Eigen::Index>(i));
  }
  return out;
}

CateModel fit_cate(const Dataset& train, const Dataset& val, const RegressorSpec& spec) {
  if (train.count_arm(1) == 0 || train.count_arm(-1) == 0) {
    throw ArmMissingError("both treatment arms must be present in the training data");
  }
  RegressorSpec spec0 = spec;
  spec0.seed = spec.seed ^ 0x9e3779b97f4a7c15ULL;
  FittedRegressor m1 = fit_regressor(train, val, 1, spec);
  FittedRegressor m0 = fit_regressor(train, val, -1, spec0);
  return CateModel(std::move(m1), std::move(m0), train.p());
}

}  // namespace fairidr
