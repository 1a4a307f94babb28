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
#ifndef QNNW_STATEVECTOR_HPP_
#define QNNW_STATEVECTOR_HPP_

// Dense statevector simulation over the gate set {H, RY, RZ, CX}.
//
// Amplitudes are stored flat, indexed by the computational basis integer with
// qubit 0 as the least significant bit. Kernels mutate the buffer in place;
// ApplyGate/RunCircuit wrap them in a value-in/value-out interface.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qnnw/error.hpp"

namespace qnnw::sim {

using Complex = std::complex<double>;

// Ceiling on simulated width; 2^24 amplitudes is 256 MiB.
inline constexpr int kMaxQubits = 24;

class Statevector {
 public:
  // |0...0> on n_qubits.
  explicit Statevector(int n_qubits) : n_qubits_(CheckWidth(n_qubits)) {
    amplitudes_.assign(std::size_t{1} << n_qubits_, Complex(0.0, 0.0));
    amplitudes_[0] = Complex(1.0, 0.0);
  }

  // Takes ownership of an explicit amplitude array; its length must be a power
  // of two and its norm must be 1 within 1e-10.
  static Statevector FromAmplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
      throw Error(ErrorCode::kValidation,
                  "amplitude count must be a power of two >= 2, got " +
                      std::to_string(dim));
    }
    Statevector state(std::countr_zero(dim), std::move(amplitudes));
    if (std::abs(state.Norm() - 1.0) > 1e-10) {
      throw Error(ErrorCode::kValidation, "amplitudes are not normalized");
    }
    return state;
  }

  int num_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::span<Complex> mutable_amplitudes() noexcept { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  double Norm() const {
    double sum = 0.0;
    for (const Complex& a : amplitudes_) sum += std::norm(a);
    return std::sqrt(sum);
  }

  std::vector<double> Probabilities() const {
    std::vector<double> probs(amplitudes_.size());
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
      probs[i] = std::norm(amplitudes_[i]);
    }
    return probs;
  }

  // Resets to |0...0> without reallocating.
  void Reset() {
    std::fill(amplitudes_.begin(), amplitudes_.end(), Complex(0.0, 0.0));
    amplitudes_[0] = Complex(1.0, 0.0);
  }

 private:
  Statevector(int n_qubits, std::vector<Complex> amplitudes)
      : n_qubits_(CheckWidth(n_qubits)), amplitudes_(std::move(amplitudes)) {}

  static int CheckWidth(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
      throw Error(ErrorCode::kCapacity,
                  "qubit count " + std::to_string(n_qubits) +
                      " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    return n_qubits;
  }

  int n_qubits_;
  std::vector<Complex> amplitudes_;
};

inline Statevector InitZeroState(int n_qubits) { return Statevector(n_qubits); }

enum class GateKind { kH, kRY, kRZ, kCX };

inline const char* GateKindName(GateKind kind) {
  switch (kind) {
    case GateKind::kH: return "H";
    case GateKind::kRY: return "RY";
    case GateKind::kRZ: return "RZ";
    case GateKind::kCX: return "CX";
  }
  return "?";
}

// A gate with a parameter_slot reads its angle from the parameter vector at
// run time; the stored angle is then only a placeholder.
struct Gate {
  GateKind kind = GateKind::kH;
  int target = 0;
  std::optional<int> control;
  std::optional<double> angle;
  std::optional<std::size_t> parameter_slot;

  static Gate H(int target) { return Gate{GateKind::kH, target, {}, {}, {}}; }
  static Gate RY(int target, double angle) {
    return Gate{GateKind::kRY, target, {}, angle, {}};
  }
  static Gate RZ(int target, double angle) {
    return Gate{GateKind::kRZ, target, {}, angle, {}};
  }
  static Gate BoundRY(int target, std::size_t slot) {
    return Gate{GateKind::kRY, target, {}, 0.0, slot};
  }
  static Gate BoundRZ(int target, std::size_t slot) {
    return Gate{GateKind::kRZ, target, {}, 0.0, slot};
  }
  static Gate CX(int control, int target) {
    return Gate{GateKind::kCX, target, control, {}, {}};
  }

  bool is_rotation() const {
    return kind == GateKind::kRY || kind == GateKind::kRZ;
  }
};

inline void ValidateGate(const Gate& gate, int n_qubits) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kValidation,
                std::string(GateKindName(gate.kind)) + " gate: " + what);
  };
  if (gate.target < 0 || gate.target >= n_qubits) {
    fail("target " + std::to_string(gate.target) + " out of range");
  }
  if (gate.control.has_value() != (gate.kind == GateKind::kCX)) {
    fail("control must be present exactly for CX");
  }
  if (gate.angle.has_value() != gate.is_rotation()) {
    fail("angle must be present exactly for RY/RZ");
  }
  if (gate.control) {
    if (*gate.control < 0 || *gate.control >= n_qubits) {
      fail("control " + std::to_string(*gate.control) + " out of range");
    }
    if (*gate.control == gate.target) fail("control equals target");
  }
}

namespace kernels {

inline void H(std::span<Complex> amps, int target) {
  const std::size_t stride = std::size_t{1} << target;
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a = amps[i];
      const Complex b = amps[i + stride];
      amps[i] = (a + b) * r;
      amps[i + stride] = (a - b) * r;
    }
  }
}

// RY(theta) = [[c, -s], [s, c]] with c = cos(theta/2), s = sin(theta/2).
inline void RY(std::span<Complex> amps, int target, double theta) {
  const std::size_t stride = std::size_t{1} << target;
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a = amps[i];
      const Complex b = amps[i + stride];
      amps[i] = Complex(c * a.real() - s * b.real(), c * a.imag() - s * b.imag());
      amps[i + stride] =
          Complex(s * a.real() + c * b.real(), s * a.imag() + c * b.imag());
    }
  }
}

// RZ(theta) = diag(e^{-i theta/2}, e^{+i theta/2}).
inline void RZ(std::span<Complex> amps, int target, double theta) {
  const std::size_t stride = std::size_t{1} << target;
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a = amps[i];
      const Complex b = amps[i + stride];
      amps[i] = Complex(c * a.real() + s * a.imag(), c * a.imag() - s * a.real());
      amps[i + stride] =
          Complex(c * b.real() - s * b.imag(), c * b.imag() + s * b.real());
    }
  }
}

inline void CX(std::span<Complex> amps, int control, int target) {
  const std::size_t cmask = std::size_t{1} << control;
  const std::size_t tmask = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(amps[i], amps[i | tmask]);
  }
}

}  // namespace kernels

// Angle a gate would use given a parameter vector.
inline double ResolveAngle(const Gate& gate, std::span<const double> params) {
  if (gate.parameter_slot) {
    if (*gate.parameter_slot >= params.size()) {
      throw Error(ErrorCode::kBinding,
                  "parameter slot " + std::to_string(*gate.parameter_slot) +
                      " not in parameter vector of size " +
                      std::to_string(params.size()));
    }
    return params[*gate.parameter_slot];
  }
  return gate.angle.value_or(0.0);
}

// Applies gate with an explicit angle (ignored for H/CX). No validation.
inline void ApplyGateUnchecked(Statevector& state, const Gate& gate,
                               double angle) {
  auto amps = state.mutable_amplitudes();
  switch (gate.kind) {
    case GateKind::kH: kernels::H(amps, gate.target); break;
    case GateKind::kRY: kernels::RY(amps, gate.target, angle); break;
    case GateKind::kRZ: kernels::RZ(amps, gate.target, angle); break;
    case GateKind::kCX: kernels::CX(amps, *gate.control, gate.target); break;
  }
}

// Applies U^dagger. H and CX are self-inverse; rotations negate the angle.
inline void ApplyInverseUnchecked(Statevector& state, const Gate& gate,
                                  double angle) {
  ApplyGateUnchecked(state, gate, -angle);
}

inline void ApplyGateInPlace(Statevector& state, const Gate& gate) {
  ValidateGate(gate, state.num_qubits());
  if (gate.parameter_slot) {
    throw Error(ErrorCode::kBinding,
                "gate references parameter slot " +
                    std::to_string(*gate.parameter_slot) +
                    " but no parameters were supplied");
  }
  ApplyGateUnchecked(state, gate, gate.angle.value_or(0.0));
}

inline Statevector ApplyGate(Statevector state, const Gate& gate) {
  ApplyGateInPlace(state, gate);
  return state;
}

enum class ObservableKind { kSingleQubitZ, kGlobalZParity };

struct Observable {
  ObservableKind kind = ObservableKind::kSingleQubitZ;
  int qubit = 0;

  static Observable Z(int qubit) {
    return Observable{ObservableKind::kSingleQubitZ, qubit};
  }
  static Observable Parity() {
    return Observable{ObservableKind::kGlobalZParity, 0};
  }
};

inline void ValidateObservable(const Observable& obs, int n_qubits) {
  if (obs.kind == ObservableKind::kSingleQubitZ &&
      (obs.qubit < 0 || obs.qubit >= n_qubits)) {
    throw Error(ErrorCode::kValidation,
                "observable qubit " + std::to_string(obs.qubit) +
                    " out of range");
  }
}

// Eigenvalue (+1/-1) of a diagonal Z-type observable on basis state `index`.
inline double ObservableSign(const Observable& obs, std::size_t index) {
  if (obs.kind == ObservableKind::kSingleQubitZ) {
    return ((index >> obs.qubit) & 1U) ? -1.0 : 1.0;
  }
  return (std::popcount(index) & 1) ? -1.0 : 1.0;
}

inline double Expectation(const Statevector& state, const Observable& obs) {
  ValidateObservable(obs, state.num_qubits());
  const auto amps = state.amplitudes();
  double sum = 0.0;
  if (obs.kind == ObservableKind::kSingleQubitZ) {
    const std::size_t mask = std::size_t{1} << obs.qubit;
    for (std::size_t i = 0; i < amps.size(); ++i) {
      const double p = std::norm(amps[i]);
      sum += (i & mask) ? -p : p;
    }
  } else {
    for (std::size_t i = 0; i < amps.size(); ++i) {
      sum += ObservableSign(obs, i) * std::norm(amps[i]);
    }
  }
  // Rounding can push |sum| a few ulps past 1.
  return std::clamp(sum, -1.0, 1.0);
}

// Multiplies the state by a diagonal Z-type observable.
inline void ApplyObservable(Statevector& state, const Observable& obs) {
  auto amps = state.mutable_amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (ObservableSign(obs, i) < 0) amps[i] = -amps[i];
  }
}

inline void ValidateCircuit(std::span<const Gate> gates,
                            std::span<const double> params, int n_qubits) {
  for (const Gate& gate : gates) {
    ValidateGate(gate, n_qubits);
    if (gate.parameter_slot && *gate.parameter_slot >= params.size()) {
      throw Error(ErrorCode::kBinding,
                  "dangling parameter slot " +
                      std::to_string(*gate.parameter_slot) + " (have " +
                      std::to_string(params.size()) + " parameters)");
    }
  }
}

// Applies `gates` to an existing state, reading slotted angles from `params`.
inline void RunCircuitInPlace(Statevector& state, std::span<const Gate> gates,
                              std::span<const double> params) {
  ValidateCircuit(gates, params, state.num_qubits());
  for (const Gate& gate : gates) {
    ApplyGateUnchecked(state, gate, ResolveAngle(gate, params));
  }
}

inline Statevector RunCircuit(std::span<const Gate> gates,
                              std::span<const double> params, int n_qubits) {
  Statevector state(n_qubits);
  RunCircuitInPlace(state, gates, params);
  return state;
}

}  // namespace qnnw::sim

#endif  // QNNW_STATEVECTOR_HPP_
