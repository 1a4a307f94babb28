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
#ifndef QNNW_GRADCHECK_HPP_
#define QNNW_GRADCHECK_HPP_

// Self-check suite: gate kernels against the dense oracle, adjoint against
// parameter shift, both against central finite differences, and the full
// hybrid model against finite differences of its loss.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qnnw/dense_oracle.hpp"
#include "qnnw/gradients.hpp"
#include "qnnw/hybrid_model.hpp"
#include "qnnw/quantum_layer.hpp"
#include "qnnw/statevector.hpp"

namespace qnnw::gradcheck {

// |a - b| / max(|a|, |b|, 1e-4). The floor keeps entries that are zero up to
// rounding from dominating the relative measure.
inline double RelativeError(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-4});
}

// Random circuit over {H, RY, RZ, CX}; rotations are bound to random slots in
// [0, n_slots) about half the time (slots may repeat), otherwise fixed.
template <typename Rng>
std::vector<sim::Gate> RandomCircuit(Rng& rng, int n_qubits, int n_gates,
                                     std::size_t n_slots) {
  std::uniform_int_distribution<int> kind_dist(0, n_qubits > 1 ? 3 : 2);
  std::uniform_int_distribution<int> qubit(0, n_qubits - 1);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::bernoulli_distribution bind(0.5);
  std::vector<sim::Gate> gates;
  for (int i = 0; i < n_gates; ++i) {
    const int k = kind_dist(rng);
    const int t = qubit(rng);
    if (k == 0) {
      gates.push_back(sim::Gate::H(t));
    } else if (k == 3) {
      int c = qubit(rng);
      while (c == t) c = qubit(rng);
      gates.push_back(sim::Gate::CX(c, t));
    } else {
      const bool ry = (k == 1);
      if (n_slots > 0 && bind(rng)) {
        const std::size_t slot =
            std::uniform_int_distribution<std::size_t>(0, n_slots - 1)(rng);
        gates.push_back(ry ? sim::Gate::BoundRY(t, slot) : sim::Gate::BoundRZ(t, slot));
      } else {
        const double a = angle(rng);
        gates.push_back(ry ? sim::Gate::RY(t, a) : sim::Gate::RZ(t, a));
      }
    }
  }
  return gates;
}

inline std::vector<double> FiniteDifferenceGradient(std::span<const sim::Gate> gates,
                                                    std::span<const double> params,
                                                    int n_qubits,
                                                    const sim::Observable& obs,
                                                    double h = 1e-5) {
  std::vector<double> p(params.begin(), params.end());
  std::vector<double> grad(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double base = p[i];
    p[i] = base + h;
    const double plus = sim::CircuitExpectation(gates, p, n_qubits, obs);
    p[i] = base - h;
    const double minus = sim::CircuitExpectation(gates, p, n_qubits, obs);
    p[i] = base;
    grad[i] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

// Gate application under test; angle is already resolved.
using GateApplier = std::function<void(sim::Statevector&, const sim::Gate&, double)>;

inline GateApplier DefaultApplier() {
  return [](sim::Statevector& s, const sim::Gate& g, double a) {
    sim::ApplyGateUnchecked(s, g, a);
  };
}

struct CheckResult {
  std::string name;
  std::size_t cases = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
  }
};

inline CheckResult CheckGateKernels(std::uint64_t seed, const GateApplier& apply,
                                    int n_circuits = 500) {
  CheckResult r{"gate-kernels-vs-dense", 0, 0.0, 1e-12, true};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int c = 0; c < n_circuits; ++c) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const int len = std::uniform_int_distribution<int>(0, 20)(rng);
    const std::size_t n_slots = 4;
    const auto gates = RandomCircuit(rng, n, len, n_slots);
    std::vector<double> params(n_slots);
    for (double& p : params) p = angle(rng);
    sim::Statevector state(n);
    for (const sim::Gate& g : gates) apply(state, g, sim::ResolveAngle(g, params));
    const auto expect = oracle::Apply(oracle::CircuitUnitary(gates, params, n),
                                      oracle::ZeroState(n));
    for (std::size_t i = 0; i < expect.size(); ++i) {
      r.max_error = std::max(r.max_error, std::abs(state[i] - expect[i]));
    }
    ++r.cases;
  }
  r.passed = r.max_error <= r.tolerance;
  return r;
}

struct GradientCheckResults {
  CheckResult adjoint_vs_shift{"adjoint-vs-parameter-shift", 0, 0.0, 1e-9, true};
  CheckResult shift_vs_fd{"parameter-shift-vs-finite-difference", 0, 0.0, 1e-5, true};
  CheckResult adjoint_vs_fd{"adjoint-vs-finite-difference", 0, 0.0, 1e-5, true};
};

// Random ansatz instances, n <= 6, reps 1-3, with random inputs, parameters
// and observable kind.
inline GradientCheckResults CheckAnsatzGradients(std::uint64_t seed, int n_instances = 200) {
  GradientCheckResults out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int k = 0; k < n_instances; ++k) {
    AnsatzSpec spec;
    spec.n_qubits = std::uniform_int_distribution<int>(1, 6)(rng);
    spec.reps = std::uniform_int_distribution<int>(1, 3)(rng);
    spec.observable = std::bernoulli_distribution(0.75)(rng)
                          ? sim::Observable::Z(std::uniform_int_distribution<int>(
                                0, spec.n_qubits - 1)(rng))
                          : sim::Observable::Parity();
    const auto gates = BuildAnsatz(spec);
    std::vector<double> slots(static_cast<std::size_t>(spec.num_slots()));
    for (double& s : slots) s = angle(rng);
    const auto adj = sim::AdjointGradient(gates, slots, spec.n_qubits, spec.observable);
    const auto ps = sim::ParameterShiftGradient(gates, slots, spec.n_qubits, spec.observable);
    const auto fd = FiniteDifferenceGradient(gates, slots, spec.n_qubits, spec.observable);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      out.adjoint_vs_shift.max_error =
          std::max(out.adjoint_vs_shift.max_error, std::abs(adj[i] - ps[i]));
      out.shift_vs_fd.max_error = std::max(out.shift_vs_fd.max_error, RelativeError(ps[i], fd[i]));
      out.adjoint_vs_fd.max_error =
          std::max(out.adjoint_vs_fd.max_error, RelativeError(adj[i], fd[i]));
    }
    ++out.adjoint_vs_shift.cases;
    ++out.shift_vs_fd.cases;
    ++out.adjoint_vs_fd.cases;
  }
  for (CheckResult* c : {&out.adjoint_vs_shift, &out.shift_vs_fd, &out.adjoint_vs_fd}) {
    c->passed = c->max_error <= c->tolerance;
  }
  return out;
}

// Hybrid model with input dim 6, 3 qubits, reps 1: analytic loss gradient
// against central differences of the loss.
inline CheckResult CheckHybridModel(std::uint64_t seed, int n_trials = 5,
                                    double h = 1e-5) {
  CheckResult r{"hybrid-model-vs-finite-difference", 0, 0.0, 1e-4, true};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pixel(0.0, 1.0);
  ModelConfig cfg;
  cfg.input_dim = 6;
  cfg.ansatz.n_qubits = 3;
  cfg.ansatz.reps = 1;
  for (int t = 0; t < n_trials; ++t) {
    HybridModel model = HybridModel::Initialized(cfg, rng());
    // Spread theta and the head so the loss is not flat.
    for (double& v : model.theta()) v *= 3.0;
    model.head().weights[0] = 2.0 + pixel(rng);
    std::vector<double> x(6);
    for (double& v : x) v = pixel(rng);
    const Example ex{x, t % 2};
    const auto analytic = model.LossAndGradient(ex).gradient;
    std::vector<double> flat = model.FlatParameters();
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const double base = flat[i];
      flat[i] = base + h;
      model.SetFlatParameters(flat);
      const double plus = model.Loss(ex);
      flat[i] = base - h;
      model.SetFlatParameters(flat);
      const double minus = model.Loss(ex);
      flat[i] = base;
      model.SetFlatParameters(flat);
      r.max_error = std::max(r.max_error, RelativeError(analytic[i], (plus - minus) / (2 * h)));
      ++r.cases;
    }
  }
  r.passed = r.max_error <= r.tolerance;
  return r;
}

inline SuiteReport RunSuite(std::uint64_t seed, const GateApplier& apply = DefaultApplier()) {
  SuiteReport report;
  report.checks.push_back(CheckGateKernels(seed, apply));
  const GradientCheckResults g = CheckAnsatzGradients(seed + 1);
  report.checks.push_back(g.adjoint_vs_shift);
  report.checks.push_back(g.shift_vs_fd);
  report.checks.push_back(g.adjoint_vs_fd);
  report.checks.push_back(CheckHybridModel(seed + 2));
  return report;
}

inline std::string FormatSuite(const SuiteReport& report) {
  std::ostringstream os;
  for (const CheckResult& c : report.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << " cases=" << c.cases
       << " max_error=" << std::scientific << std::setprecision(3) << c.max_error
       << " tolerance=" << c.tolerance << "\n";
  }
  os << (report.all_passed() ? "gradcheck: all checks passed\n"
                             : "gradcheck: FAILURES present\n");
  return os.str();
}

}  // namespace qnnw::gradcheck

#endif  // QNNW_GRADCHECK_HPP_
