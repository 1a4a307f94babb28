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
#ifndef QNNW_DENSE_ORACLE_HPP_
#define QNNW_DENSE_ORACLE_HPP_

// Reference simulator built from explicit 2^n x 2^n unitaries (Kronecker
// products of 2x2 blocks). Shares no code with the statevector kernels; meant
// for n <= 6 cross-checks only.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "qnnw/statevector.hpp"

namespace qnnw::oracle {

using sim::Complex;

// Dense row-major square matrix.
struct Matrix {
  std::size_t dim = 0;
  std::vector<Complex> data;

  explicit Matrix(std::size_t d = 0) : dim(d), data(d * d, Complex(0.0, 0.0)) {}
  static Matrix Identity(std::size_t d) {
    Matrix m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }
  Complex& operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }
};

inline Matrix Multiply(const Matrix& a, const Matrix& b) {
  Matrix out(a.dim);
  for (std::size_t i = 0; i < a.dim; ++i) {
    for (std::size_t k = 0; k < a.dim; ++k) {
      const Complex v = a(i, k);
      if (v == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < a.dim; ++j) out(i, j) += v * b(k, j);
    }
  }
  return out;
}

inline Matrix Kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.dim * b.dim);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j)
      for (std::size_t k = 0; k < b.dim; ++k)
        for (std::size_t l = 0; l < b.dim; ++l)
          out(i * b.dim + k, j * b.dim + l) = a(i, j) * b(k, l);
  return out;
}

inline Matrix Single(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

inline Matrix PauliX() { return Single(0.0, 1.0, 1.0, 0.0); }
inline Matrix PauliZ() { return Single(1.0, 0.0, 0.0, -1.0); }
inline Matrix Proj0() { return Single(1.0, 0.0, 0.0, 0.0); }
inline Matrix Proj1() { return Single(0.0, 0.0, 0.0, 1.0); }

inline Matrix GateBlock(sim::GateKind kind, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  switch (kind) {
    case sim::GateKind::kH: {
      const double r = 1.0 / std::sqrt(2.0);
      return Single(r, r, r, -r);
    }
    case sim::GateKind::kRY: return Single(c, -s, s, c);
    case sim::GateKind::kRZ:
      return Single(std::polar(1.0, -angle / 2.0), 0.0, 0.0, std::polar(1.0, angle / 2.0));
    case sim::GateKind::kCX: break;
  }
  return Matrix::Identity(2);
}

// Kronecker product over qubits n-1 ... 0 (qubit 0 is the rightmost factor,
// i.e. the least significant index bit). `blocks[q]` acts on qubit q.
inline Matrix KronChain(const std::vector<Matrix>& blocks) {
  Matrix out = blocks.back();
  for (std::size_t q = blocks.size() - 1; q-- > 0;) out = Kron(out, blocks[q]);
  return out;
}

inline Matrix GateUnitary(const sim::Gate& gate, double angle, int n) {
  std::vector<Matrix> blocks(n, Matrix::Identity(2));
  if (gate.kind != sim::GateKind::kCX) {
    blocks[gate.target] = GateBlock(gate.kind, angle);
    return KronChain(blocks);
  }
  std::vector<Matrix> off = blocks;
  std::vector<Matrix> on = blocks;
  off[*gate.control] = Proj0();
  on[*gate.control] = Proj1();
  on[gate.target] = PauliX();
  Matrix a = KronChain(off);
  const Matrix b = KronChain(on);
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
  return a;
}

inline Matrix CircuitUnitary(std::span<const sim::Gate> gates,
                             std::span<const double> params, int n) {
  Matrix u = Matrix::Identity(std::size_t{1} << n);
  for (const sim::Gate& g : gates) {
    const double angle =
        g.parameter_slot ? params[*g.parameter_slot] : g.angle.value_or(0.0);
    u = Multiply(GateUnitary(g, angle, n), u);
  }
  return u;
}

inline std::vector<Complex> Apply(const Matrix& m, std::span<const Complex> v) {
  std::vector<Complex> out(m.dim, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j) out[i] += m(i, j) * v[j];
  return out;
}

inline std::vector<Complex> ZeroState(int n) {
  std::vector<Complex> v(std::size_t{1} << n, Complex(0.0, 0.0));
  v[0] = 1.0;
  return v;
}

inline Matrix ObservableMatrix(const sim::Observable& obs, int n) {
  std::vector<Matrix> blocks(n, Matrix::Identity(2));
  if (obs.kind == sim::ObservableKind::kSingleQubitZ) {
    blocks[obs.qubit] = PauliZ();
  } else {
    for (Matrix& b : blocks) b = PauliZ();
  }
  return KronChain(blocks);
}

// Tr(rho O) with rho = |psi><psi| formed explicitly.
inline double DensityExpectation(std::span<const Complex> psi, const Matrix& obs) {
  const std::size_t d = psi.size();
  Complex trace(0.0, 0.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) trace += psi[i] * std::conj(psi[k]) * obs(k, i);
  return trace.real();
}

}  // namespace qnnw::oracle

#endif  // QNNW_DENSE_ORACLE_HPP_
