// Copyright 2026 The dflearn Authors.
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

// Linear predictor with classical momentum SGD, feature standardization and
// a plain-text checkpoint format.

#ifndef DFL_LINEAR_MODEL_HPP_
#define DFL_LINEAR_MODEL_HPP_

#include "dfl/core.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dfl {

/// y = weights . x + bias. Parameters start at zero.
template <typename Scalar>
struct LinearModel {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  LinearModel() = default;
  explicit LinearModel(Eigen::Index feature_count) : weights(Vector::Zero(feature_count)) {
    if (feature_count <= 0) throw DimensionError("LinearModel: feature count must be positive");
  }

  Eigen::Index feature_count() const { return weights.size(); }
  bool finite() const { return weights.allFinite() && std::isfinite(bias); }

  bool operator==(const LinearModel& other) const {
    return weights.size() == other.weights.size() && weights == other.weights &&
           bias == other.bias;
  }

  Vector weights;
  Scalar bias = Scalar(0);
};

template <typename Scalar>
struct OptimizerState {
  using Vector = typename LinearModel<Scalar>::Vector;

  OptimizerState() = default;
  OptimizerState(Eigen::Index feature_count, Scalar learning_rate, Scalar momentum)
      : learning_rate(learning_rate),
        momentum(momentum),
        velocity(Vector::Zero(feature_count)) {
    if (!(learning_rate > Scalar(0))) throw ModelError("optimizer: learning rate must be positive");
    if (!(momentum >= Scalar(0) && momentum < Scalar(1))) {
      throw ModelError("optimizer: momentum must lie in [0, 1)");
    }
  }

  Scalar learning_rate = Scalar(0.01);
  Scalar momentum = Scalar(0);
  Vector velocity;
  Scalar velocity_bias = Scalar(0);
};

template <typename Scalar>
typename LinearModel<Scalar>::Vector predict(
    const LinearModel<Scalar>& model,
    const Eigen::Ref<const typename LinearModel<Scalar>::Matrix>& features) {
  if (features.cols() != model.feature_count()) {
    throw DimensionError("predict: expected " + std::to_string(model.feature_count()) +
                         " feature columns, got " + std::to_string(features.cols()));
  }
  typename LinearModel<Scalar>::Vector out = features * model.weights;
  out.array() += model.bias;
  return out;
}

/// Chain rule through the linear map: returns the mean of g_i * x_i and the
/// mean of g_i.
template <typename Scalar>
std::pair<typename LinearModel<Scalar>::Vector, Scalar> parameter_gradient(
    const Eigen::Ref<const typename LinearModel<Scalar>::Matrix>& features,
    const Eigen::Ref<const typename LinearModel<Scalar>::Vector>& loss_grad) {
  if (features.rows() != loss_grad.size()) {
    throw DimensionError("gradient: " + std::to_string(loss_grad.size()) +
                         " loss gradients for " + std::to_string(features.rows()) + " rows");
  }
  const Eigen::Index n = features.rows();
  if (n == 0) {
    return {LinearModel<Scalar>::Vector::Zero(features.cols()), Scalar(0)};
  }
  typename LinearModel<Scalar>::Vector gw = features.transpose() * loss_grad;
  gw /= static_cast<Scalar>(n);
  return {std::move(gw), loss_grad.sum() / static_cast<Scalar>(n)};
}

/// One momentum step: v <- mu * v + grad; params <- params - alpha * v.
template <typename Scalar>
void apply_gradient(LinearModel<Scalar>& model, OptimizerState<Scalar>& state,
                    const Eigen::Ref<const typename LinearModel<Scalar>::Matrix>& features,
                    const Eigen::Ref<const typename LinearModel<Scalar>::Vector>& loss_grad) {
  if (features.cols() != model.feature_count()) {
    throw DimensionError("apply_gradient: feature count mismatch");
  }
  if (!loss_grad.allFinite()) throw TrainingError("apply_gradient: non-finite loss gradient");
  if (state.velocity.size() != model.feature_count()) {
    state.velocity = LinearModel<Scalar>::Vector::Zero(model.feature_count());
    state.velocity_bias = Scalar(0);
  }
  auto [gw, gb] = parameter_gradient<Scalar>(features, loss_grad);
  state.velocity = state.momentum * state.velocity + gw;
  state.velocity_bias = state.momentum * state.velocity_bias + gb;
  model.weights -= state.learning_rate * state.velocity;
  model.bias -= state.learning_rate * state.velocity_bias;
  if (!model.finite()) throw TrainingError("apply_gradient: parameters diverged");
}

/// (1/n) * sum (y - y_hat)^2 / 2.
template <typename Scalar>
Scalar mse_loss(const LinearModel<Scalar>& model,
                const Eigen::Ref<const typename LinearModel<Scalar>::Matrix>& features,
                const Eigen::Ref<const typename LinearModel<Scalar>::Vector>& targets) {
  if (targets.size() != features.rows()) throw DimensionError("mse_loss: target count mismatch");
  if (targets.size() == 0) return Scalar(0);
  const auto residual = (predict(model, features) - targets).eval();
  return residual.squaredNorm() / (Scalar(2) * static_cast<Scalar>(targets.size()));
}

/// Per-feature affine map to zero mean and unit (population) variance.
/// Constant columns keep scale 1.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  static Standardizer identity(Eigen::Index feature_count);
  static Standardizer fit(const Eigen::MatrixXd& features);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& features) const;
  Eigen::Index feature_count() const { return mean.size(); }
  bool operator==(const Standardizer& other) const;
};

/// Everything needed to reproduce predictions on raw features, plus free-form
/// training metadata.
struct Checkpoint {
  LinearModel<double> model;
  Standardizer standardizer;
  std::vector<std::pair<std::string, std::string>> metadata;

  Eigen::VectorXd predict_raw(const Eigen::MatrixXd& raw_features) const;
  bool operator==(const Checkpoint& other) const;
};

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in);
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace dfl

#endif  // DFL_LINEAR_MODEL_HPP_
