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
#ifndef QNNW_QUANTUM_LAYER_HPP_
#define QNNW_QUANTUM_LAYER_HPP_

// The quantum hidden layer: a fixed ansatz mapping an n-d input vector and a
// (reps * n)-d trainable vector to one expectation value.
//
// Circuit, in order:
//   encoding      H(j), RZ(x_j)                 for every qubit j
//   per rep r     RY(theta_{r,j})               for every qubit j
//                 CX(j -> j+1)                  for j = 0 .. n-2
//
// Parameter slots: inputs occupy 0..n-1, trainables n..n + reps*n - 1
// (rep-major). The layer output is <O> for the configured observable.

#include <span>
#include <string>
#include <vector>

#include "qnnw/error.hpp"
#include "qnnw/gradients.hpp"
#include "qnnw/statevector.hpp"

namespace qnnw {

struct AnsatzSpec {
  int n_qubits = 16;
  int reps = 2;
  sim::Observable observable = sim::Observable::Z(0);

  int num_inputs() const { return n_qubits; }
  int num_trainable() const { return reps * n_qubits; }
  int num_slots() const { return num_inputs() + num_trainable(); }
};

inline void ValidateAnsatzSpec(const AnsatzSpec& spec) {
  if (spec.n_qubits < 1 || spec.n_qubits > sim::kMaxQubits) {
    throw Error(ErrorCode::kCapacity,
                "ansatz n_qubits " + std::to_string(spec.n_qubits));
  }
  if (spec.reps < 1) {
    throw Error(ErrorCode::kValidation,
                "ansatz reps must be >= 1, got " + std::to_string(spec.reps));
  }
  sim::ValidateObservable(spec.observable, spec.n_qubits);
}

inline std::vector<sim::Gate> BuildAnsatz(const AnsatzSpec& spec) {
  ValidateAnsatzSpec(spec);
  const int n = spec.n_qubits;
  std::vector<sim::Gate> gates;
  gates.reserve(2 * n + spec.reps * (2 * n - 1));
  for (int j = 0; j < n; ++j) {
    gates.push_back(sim::Gate::H(j));
    gates.push_back(sim::Gate::BoundRZ(j, static_cast<std::size_t>(j)));
  }
  for (int r = 0; r < spec.reps; ++r) {
    for (int j = 0; j < n; ++j) {
      gates.push_back(
          sim::Gate::BoundRY(j, static_cast<std::size_t>(n + r * n + j)));
    }
    for (int j = 0; j + 1 < n; ++j) gates.push_back(sim::Gate::CX(j, j + 1));
  }
  return gates;
}

struct QuantumLayerOutput {
  double value = 0.0;
  std::vector<double> grad_inputs;
  std::vector<double> grad_params;
};

// Holds the built circuit so repeated evaluations skip construction.
class QuantumLayer {
 public:
  explicit QuantumLayer(AnsatzSpec spec)
      : spec_(spec), gates_(BuildAnsatz(spec_)) {}

  const AnsatzSpec& spec() const noexcept { return spec_; }
  std::span<const sim::Gate> gates() const noexcept { return gates_; }

  double Forward(std::span<const double> inputs,
                 std::span<const double> params) const {
    const std::vector<double> slots = Pack(inputs, params);
    return sim::CircuitExpectation(gates_, slots, spec_.n_qubits,
                                   spec_.observable);
  }

  QuantumLayerOutput Backward(std::span<const double> inputs,
                              std::span<const double> params) const {
    const std::vector<double> slots = Pack(inputs, params);
    sim::ValueAndGradient vg = sim::AdjointValueAndGradient(
        gates_, slots, spec_.n_qubits, spec_.observable);
    return Split(std::move(vg));
  }

  // Same contract as Backward but via parameter shift; slower, independent.
  QuantumLayerOutput BackwardParameterShift(
      std::span<const double> inputs, std::span<const double> params) const {
    const std::vector<double> slots = Pack(inputs, params);
    sim::ValueAndGradient vg;
    vg.value = sim::CircuitExpectation(gates_, slots, spec_.n_qubits,
                                       spec_.observable);
    vg.gradient = sim::ParameterShiftGradient(gates_, slots, spec_.n_qubits,
                                              spec_.observable);
    return Split(std::move(vg));
  }

  std::vector<double> Pack(std::span<const double> inputs,
                           std::span<const double> params) const {
    if (inputs.size() != static_cast<std::size_t>(spec_.num_inputs()) ||
        params.size() != static_cast<std::size_t>(spec_.num_trainable())) {
      throw Error(ErrorCode::kShape,
                  "quantum layer expects " +
                      std::to_string(spec_.num_inputs()) + " inputs and " +
                      std::to_string(spec_.num_trainable()) +
                      " parameters, got " + std::to_string(inputs.size()) +
                      " and " + std::to_string(params.size()));
    }
    std::vector<double> slots(inputs.begin(), inputs.end());
    slots.insert(slots.end(), params.begin(), params.end());
    return slots;
  }

 private:
  QuantumLayerOutput Split(sim::ValueAndGradient vg) const {
    QuantumLayerOutput out;
    out.value = vg.value;
    const auto split = vg.gradient.begin() + spec_.num_inputs();
    out.grad_inputs.assign(vg.gradient.begin(), split);
    out.grad_params.assign(split, vg.gradient.end());
    return out;
  }

  AnsatzSpec spec_;
  std::vector<sim::Gate> gates_;
};

}  // namespace qnnw

#endif  // QNNW_QUANTUM_LAYER_HPP_
