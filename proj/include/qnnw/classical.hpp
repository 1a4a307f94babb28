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
#ifndef QNNW_CLASSICAL_HPP_
#define QNNW_CLASSICAL_HPP_

// Minimal dense-network toolkit with hand-chained reverse-mode gradients.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qnnw/error.hpp"

namespace qnnw::nn {

// y = W x + b, with W stored row-major as out x in.
struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  DenseLayer() = default;
  DenseLayer(int in_dim, int out_dim)
      : in(in_dim),
        out(out_dim),
        weights(static_cast<std::size_t>(in_dim) * out_dim, 0.0),
        bias(static_cast<std::size_t>(out_dim), 0.0) {
    if (in_dim < 1 || out_dim < 1) {
      throw Error(ErrorCode::kShape, "dense layer dimensions must be positive");
    }
  }

  std::size_t num_parameters() const { return weights.size() + bias.size(); }

  double& w(int row, int col) {
    return weights[static_cast<std::size_t>(row) * in + col];
  }
  double w(int row, int col) const {
    return weights[static_cast<std::size_t>(row) * in + col];
  }
};

// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and bias.
template <typename Rng>
void InitUniform(DenseLayer& layer, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : layer.weights) v = dist(rng);
  for (double& v : layer.bias) v = dist(rng);
}

inline void CheckSize(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::kShape, std::string(what) + ": expected " +
                                       std::to_string(want) + ", got " +
                                       std::to_string(got));
  }
}

inline std::vector<double> DenseForward(const DenseLayer& layer,
                                        std::span<const double> x) {
  CheckSize(x.size(), static_cast<std::size_t>(layer.in), "dense input");
  std::vector<double> y(layer.bias);
  for (int r = 0; r < layer.out; ++r) {
    const double* row = layer.weights.data() + static_cast<std::size_t>(r) * layer.in;
    double acc = 0.0;
    for (int c = 0; c < layer.in; ++c) acc += row[c] * x[c];
    y[r] += acc;
  }
  return y;
}

struct DenseGrads {
  std::vector<double> d_input;
  std::vector<double> d_weights;
  std::vector<double> d_bias;
};

inline DenseGrads DenseBackward(const DenseLayer& layer,
                                std::span<const double> x,
                                std::span<const double> d_output) {
  CheckSize(x.size(), static_cast<std::size_t>(layer.in), "dense input");
  CheckSize(d_output.size(), static_cast<std::size_t>(layer.out),
            "dense output gradient");
  DenseGrads g;
  g.d_input.assign(layer.in, 0.0);
  g.d_weights.assign(layer.weights.size(), 0.0);
  g.d_bias.assign(d_output.begin(), d_output.end());
  for (int r = 0; r < layer.out; ++r) {
    const double dy = d_output[r];
    const std::size_t off = static_cast<std::size_t>(r) * layer.in;
    for (int c = 0; c < layer.in; ++c) {
      g.d_weights[off + c] = dy * x[c];
      g.d_input[c] += layer.weights[off + c] * dy;
    }
  }
  return g;
}

inline double Tanh(double x) { return std::tanh(x); }
// Derivative expressed through the forward output y = tanh(x).
inline double TanhBackward(double y, double dy) { return dy * (1.0 - y * y); }

inline double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}
inline double SigmoidBackward(double y, double dy) { return dy * y * (1.0 - y); }

inline double ScaleByPi(double x) { return std::numbers::pi * x; }

inline constexpr double kProbabilityClamp = 1e-7;

struct LossAndGrad {
  double loss = 0.0;
  double grad = 0.0;  // dL/dp
};

// Binary cross-entropy on a probability clamped to [1e-7, 1 - 1e-7].
inline LossAndGrad BceLoss(double p, int label) {
  if (label != 0 && label != 1) {
    throw Error(ErrorCode::kValidation,
                "BCE label must be 0 or 1, got " + std::to_string(label));
  }
  p = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  const double y = label;
  LossAndGrad out;
  out.loss = -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
  out.grad = (p - y) / (p * (1.0 - p));
  return out;
}

struct AdamState {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step_count = 0;
  std::vector<double> m;
  std::vector<double> v;

  AdamState() = default;
  explicit AdamState(std::size_t n, double learning_rate = 0.01)
      : lr(learning_rate), m(n, 0.0), v(n, 0.0) {}
};

// In-place Adam update with bias correction.
inline void AdamStep(AdamState& state, std::span<double> params,
                     std::span<const double> grads) {
  CheckSize(grads.size(), params.size(), "Adam gradient");
  CheckSize(state.m.size(), params.size(), "Adam moment buffer");
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

}  // namespace qnnw::nn

#endif  // QNNW_CLASSICAL_HPP_
