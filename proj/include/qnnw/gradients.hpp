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
#ifndef QNNW_GRADIENTS_HPP_
#define QNNW_GRADIENTS_HPP_

// Two independent gradient engines for <psi(params)|O|psi(params)>:
//
//  * ParameterShiftGradient evaluates the circuit twice per parameterized gate
//    at angle +/- pi/2. Exact for RY/RZ, whose generators have eigenvalues
//    +/-1/2. Cost O(#params * #gates).
//  * AdjointGradient does one forward sweep and one backward sweep, undoing
//    each gate on both the state and the adjoint state O|psi>. Cost
//    O(#gates).
//
// Entry i of either result is d<O>/d params[i], summed over every gate which
// reads slot i.

#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qnnw/error.hpp"
#include "qnnw/statevector.hpp"

namespace qnnw::sim {

inline void CheckDifferentiable(std::span<const Gate> gates) {
  for (const Gate& gate : gates) {
    if (gate.parameter_slot && !gate.is_rotation()) {
      throw Error(ErrorCode::kUnsupportedGenerator,
                  std::string(GateKindName(gate.kind)) +
                      " gate cannot carry a trainable parameter");
    }
  }
}

inline double CircuitExpectation(std::span<const Gate> gates,
                                 std::span<const double> params,
                                 int n_qubits, const Observable& obs) {
  return Expectation(RunCircuit(gates, params, n_qubits), obs);
}

inline std::vector<double> ParameterShiftGradient(
    std::span<const Gate> gates, std::span<const double> params, int n_qubits,
    const Observable& obs) {
  ValidateCircuit(gates, params, n_qubits);
  ValidateObservable(obs, n_qubits);
  CheckDifferentiable(gates);
  std::vector<double> grad(params.size(), 0.0);
  std::vector<Gate> shifted(gates.begin(), gates.end());
  Statevector state(n_qubits);
  auto evaluate = [&]() {
    state.Reset();
    for (const Gate& gate : shifted) {
      ApplyGateUnchecked(state, gate, ResolveAngle(gate, params));
    }
    return Expectation(state, obs);
  };
  constexpr double kShift = std::numbers::pi / 2.0;
  for (std::size_t g = 0; g < gates.size(); ++g) {
    if (!gates[g].parameter_slot) continue;
    const std::size_t slot = *gates[g].parameter_slot;
    const double base = params[slot];
    // Unbind this one occurrence so that shared slots are shifted separately.
    shifted[g].parameter_slot.reset();
    shifted[g].angle = base + kShift;
    const double plus = evaluate();
    shifted[g].angle = base - kShift;
    const double minus = evaluate();
    shifted[g] = gates[g];
    grad[slot] += 0.5 * (plus - minus);
  }
  return grad;
}

struct ValueAndGradient {
  double value = 0.0;
  std::vector<double> gradient;
};

namespace detail {

// Im <lambda| G |psi> for G = Y or Z acting on `target`.
inline double GeneratorOverlapImag(std::span<const Complex> lambda,
                                   std::span<const Complex> psi,
                                   GateKind kind, int target) {
  const std::size_t stride = std::size_t{1} << target;
  double acc = 0.0;
  for (std::size_t base = 0; base < psi.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex l0 = std::conj(lambda[i]);
      const Complex l1 = std::conj(lambda[i + stride]);
      const Complex p0 = psi[i];
      const Complex p1 = psi[i + stride];
      if (kind == GateKind::kRY) {
        // Y|psi>: (−i p1, i p0)
        acc += (l0 * Complex(p1.imag(), -p1.real())).imag() +
               (l1 * Complex(-p0.imag(), p0.real())).imag();
      } else {
        acc += (l0 * p0).imag() - (l1 * p1).imag();
      }
    }
  }
  return acc;
}

}  // namespace detail

// Value and full gradient from one forward plus one backward sweep.
inline ValueAndGradient AdjointValueAndGradient(std::span<const Gate> gates,
                                                std::span<const double> params,
                                                int n_qubits,
                                                const Observable& obs) {
  ValidateCircuit(gates, params, n_qubits);
  ValidateObservable(obs, n_qubits);
  CheckDifferentiable(gates);

  std::vector<double> angles(gates.size());
  for (std::size_t g = 0; g < gates.size(); ++g) {
    angles[g] = ResolveAngle(gates[g], params);
  }

  Statevector psi(n_qubits);
  for (std::size_t g = 0; g < gates.size(); ++g) {
    ApplyGateUnchecked(psi, gates[g], angles[g]);
  }
  ValueAndGradient out;
  out.value = Expectation(psi, obs);
  out.gradient.assign(params.size(), 0.0);

  Statevector lambda = psi;
  ApplyObservable(lambda, obs);

  // For U = exp(-i a G / 2): d<O>/da = Im <lambda|G|psi> evaluated right after
  // the gate, with lambda the observable-weighted state pulled back to there.
  for (std::size_t g = gates.size(); g-- > 0;) {
    const Gate& gate = gates[g];
    if (gate.parameter_slot) {
      out.gradient[*gate.parameter_slot] += detail::GeneratorOverlapImag(
          lambda.amplitudes(), psi.amplitudes(), gate.kind, gate.target);
    }
    if (g == 0) break;
    ApplyInverseUnchecked(psi, gate, angles[g]);
    ApplyInverseUnchecked(lambda, gate, angles[g]);
  }
  return out;
}

inline std::vector<double> AdjointGradient(std::span<const Gate> gates,
                                           std::span<const double> params,
                                           int n_qubits,
                                           const Observable& obs) {
  return AdjointValueAndGradient(gates, params, n_qubits, obs).gradient;
}

}  // namespace qnnw::sim

#endif  // QNNW_GRADIENTS_HPP_
