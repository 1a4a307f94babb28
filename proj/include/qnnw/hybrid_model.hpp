/* Copyright 2026 The QNNW Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef QNNW_HYBRID_MODEL_HPP_
#define QNNW_HYBRID_MODEL_HPP_

// Binary classifier: dense front-end -> angle map -> quantum layer -> 1x1
// dense head -> sigmoid.
//
// The angle map bounds the encoding angles. kPiSigmoid maps into (0, pi),
// where the layer's response cos(angle) is monotone; kPiTanh maps into
// (-pi, pi), where it is even and two front-end outputs of opposite sign
// become indistinguishable.
//
// Flat parameter order (used by the optimizer and by checkpoints):
//   front weights (row-major, n_qubits x input_dim), front bias,
//   theta (rep-major), head weight, head bias.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qnnw/classical.hpp"
#include "qnnw/error.hpp"
#include "qnnw/quantum_layer.hpp"

namespace qnnw {

enum class AngleMap : std::uint32_t { kPiSigmoid = 0, kPiTanh = 1 };

inline const char* AngleMapName(AngleMap m) {
  return m == AngleMap::kPiTanh ? "pi-tanh" : "pi-sigmoid";
}

inline double MapAngle(AngleMap m, double z) {
  return nn::ScaleByPi(m == AngleMap::kPiTanh ? nn::Tanh(z) : nn::Sigmoid(z));
}

// d angle / d z, written through the activation output a = tanh(z) or sigmoid(z).
inline double MapAngleBackward(AngleMap m, double activation, double d_angle) {
  const double d_act = std::numbers::pi * d_angle;
  return m == AngleMap::kPiTanh ? nn::TanhBackward(activation, d_act)
                                : nn::SigmoidBackward(activation, d_act);
}

struct ModelConfig {
  int input_dim = 784;
  AnsatzSpec ansatz;
  AngleMap angle_map = AngleMap::kPiSigmoid;

  std::size_t num_parameters() const {
    const std::size_t n = static_cast<std::size_t>(ansatz.n_qubits);
    return static_cast<std::size_t>(input_dim) * n + n +
           static_cast<std::size_t>(ansatz.num_trainable()) + 2;
  }
};

inline constexpr std::size_t kDefaultParameterCount = 12594;

// Recorded alongside parameters in checkpoints.
struct TrainingMetadata {
  std::uint64_t seed = 0;
  std::uint32_t epochs = 0;
  std::uint64_t schedule_hash = 0;

  bool operator==(const TrainingMetadata&) const = default;
};

struct Example {
  std::span<const double> input;
  int label = 0;
};

class HybridModel {
 public:
  explicit HybridModel(ModelConfig config = {})
      : config_(config),
        front_(config.input_dim, config.ansatz.n_qubits),
        theta_(static_cast<std::size_t>(config.ansatz.num_trainable()), 0.0),
        head_(1, 1),
        qlayer_(config.ansatz) {
    if (num_parameters() != config_.num_parameters()) {
      throw Error(ErrorCode::kShape, "parameter count law violated");
    }
    if (config_.input_dim == 784 && config_.ansatz.n_qubits == 16 &&
        config_.ansatz.reps == 2 && num_parameters() != kDefaultParameterCount) {
      throw Error(ErrorCode::kShape, "default model must have 12594 parameters");
    }
  }

  // Front/head: uniform +/- 1/sqrt(fan_in); theta: uniform [-1, 1].
  static HybridModel Initialized(const ModelConfig& config, std::uint64_t seed) {
    HybridModel model(config);
    std::mt19937_64 rng(seed);
    nn::InitUniform(model.front_, rng);
    std::uniform_real_distribution<double> angle(-1.0, 1.0);
    for (double& t : model.theta_) t = angle(rng);
    nn::InitUniform(model.head_, rng);
    return model;
  }

  const ModelConfig& config() const noexcept { return config_; }
  const nn::DenseLayer& front() const noexcept { return front_; }
  nn::DenseLayer& front() noexcept { return front_; }
  const nn::DenseLayer& head() const noexcept { return head_; }
  nn::DenseLayer& head() noexcept { return head_; }
  const std::vector<double>& theta() const noexcept { return theta_; }
  std::vector<double>& theta() noexcept { return theta_; }
  const QuantumLayer& quantum_layer() const noexcept { return qlayer_; }

  TrainingMetadata& metadata() noexcept { return metadata_; }
  const TrainingMetadata& metadata() const noexcept { return metadata_; }

  std::size_t num_parameters() const {
    return front_.num_parameters() + theta_.size() + head_.num_parameters();
  }

  std::vector<double> FlatParameters() const {
    std::vector<double> flat;
    flat.reserve(num_parameters());
    flat.insert(flat.end(), front_.weights.begin(), front_.weights.end());
    flat.insert(flat.end(), front_.bias.begin(), front_.bias.end());
    flat.insert(flat.end(), theta_.begin(), theta_.end());
    flat.insert(flat.end(), head_.weights.begin(), head_.weights.end());
    flat.insert(flat.end(), head_.bias.begin(), head_.bias.end());
    return flat;
  }

  void SetFlatParameters(std::span<const double> flat) {
    nn::CheckSize(flat.size(), num_parameters(), "flat parameter vector");
    auto it = flat.begin();
    auto take = [&it](std::vector<double>& dst) {
      std::copy(it, it + static_cast<std::ptrdiff_t>(dst.size()), dst.begin());
      it += static_cast<std::ptrdiff_t>(dst.size());
    };
    take(front_.weights);
    take(front_.bias);
    take(theta_);
    take(head_.weights);
    take(head_.bias);
  }

  // Quantum-layer input angles map(W x + b).
  std::vector<double> EncodeAngles(std::span<const double> input) const {
    CheckInput(input);
    std::vector<double> z = nn::DenseForward(front_, input);
    for (double& v : z) v = MapAngle(config_.angle_map, v);
    return z;
  }

  double PredictProba(std::span<const double> input) const {
    const std::vector<double> angles = EncodeAngles(input);
    const double e = qlayer_.Forward(angles, theta_);
    return nn::Sigmoid(head_.weights[0] * e + head_.bias[0]);
  }

  // Ties go to label 1.
  int PredictLabel(std::span<const double> input) const {
    return LabelFromProbability(PredictProba(input));
  }

  static int LabelFromProbability(double p) { return p >= 0.5 ? 1 : 0; }

  struct LossResult {
    double loss = 0.0;
    std::vector<double> gradient;  // flat order
  };

  // Loss of one example and its gradient w.r.t. every flat parameter.
  LossResult LossAndGradient(const Example& ex,
                             bool use_parameter_shift = false) const {
    CheckInput(ex.input);
    if (ex.label != 0 && ex.label != 1) {
      throw Error(ErrorCode::kValidation,
                  "label must be 0 or 1, got " + std::to_string(ex.label));
    }
    const int n = config_.ansatz.n_qubits;
    const bool tanh_map = config_.angle_map == AngleMap::kPiTanh;
    std::vector<double> activ = nn::DenseForward(front_, ex.input);
    for (double& v : activ) v = tanh_map ? nn::Tanh(v) : nn::Sigmoid(v);
    std::vector<double> angles(activ.size());
    for (std::size_t j = 0; j < activ.size(); ++j) {
      angles[j] = nn::ScaleByPi(activ[j]);
    }
    const QuantumLayerOutput q =
        use_parameter_shift ? qlayer_.BackwardParameterShift(angles, theta_)
                            : qlayer_.Backward(angles, theta_);
    const double logit = head_.weights[0] * q.value + head_.bias[0];
    const double p = nn::Sigmoid(logit);
    const nn::LossAndGrad bce = nn::BceLoss(p, ex.label);
    const double d_logit = nn::SigmoidBackward(p, bce.grad);

    std::vector<double> d_z(static_cast<std::size_t>(n));
    const double d_value = d_logit * head_.weights[0];
    for (int j = 0; j < n; ++j) {
      const double d_angle = d_value * q.grad_inputs[j];
      d_z[j] = MapAngleBackward(config_.angle_map, activ[j], d_angle);
    }
    const nn::DenseGrads front_grads = nn::DenseBackward(front_, ex.input, d_z);

    LossResult out;
    out.loss = bce.loss;
    out.gradient.reserve(num_parameters());
    auto& g = out.gradient;
    g.insert(g.end(), front_grads.d_weights.begin(), front_grads.d_weights.end());
    g.insert(g.end(), front_grads.d_bias.begin(), front_grads.d_bias.end());
    for (double dp : q.grad_params) g.push_back(d_value * dp);
    g.push_back(d_logit * q.value);
    g.push_back(d_logit);
    return out;
  }

  // Plain loss, used by finite-difference checks.
  double Loss(const Example& ex) const {
    return nn::BceLoss(PredictProba(ex.input), ex.label).loss;
  }

 private:
  void CheckInput(std::span<const double> input) const {
    nn::CheckSize(input.size(), static_cast<std::size_t>(config_.input_dim),
                  "model input");
  }

  ModelConfig config_;
  nn::DenseLayer front_;
  std::vector<double> theta_;
  nn::DenseLayer head_;
  QuantumLayer qlayer_;
  TrainingMetadata metadata_;
};

// Arithmetic-mean gradient over the batch followed by one Adam step over all
// parameters. Accumulation runs in batch order. Returns the mean loss.
inline double TrainStep(HybridModel& model, nn::AdamState& optimizer,
                        std::span<const Example> batch) {
  if (batch.empty()) throw Error(ErrorCode::kValidation, "empty batch");
  const std::size_t n_params = model.num_parameters();
  if (optimizer.m.size() != n_params) {
    throw Error(ErrorCode::kShape, "optimizer not sized for model");
  }
  std::vector<double> grad(n_params, 0.0);
  double loss = 0.0;
  for (const Example& ex : batch) {
    const HybridModel::LossResult r = model.LossAndGradient(ex);
    loss += r.loss;
    for (std::size_t i = 0; i < n_params; ++i) grad[i] += r.gradient[i];
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (double& v : grad) v *= scale;
  loss *= scale;
  if (!std::isfinite(loss)) {
    throw Error(ErrorCode::kNonFinite, "non-finite training loss");
  }
  std::vector<double> params = model.FlatParameters();
  nn::AdamStep(optimizer, params, grad);
  model.SetFlatParameters(params);
  return loss;
}

}  // namespace qnnw

#endif  // QNNW_HYBRID_MODEL_HPP_
