// Copyright 2026 The ucvqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference simulator for tests: full 2^n x 2^n matrices built from textbook
// gate definitions, independent of the library's in-place kernels.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ucvqa/circuit.hpp"

namespace oracle {

using C = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat m2(C a, C b, C c, C d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Mat rx(double t) { return m2(std::cos(t / 2), C(0, -std::sin(t / 2)), C(0, -std::sin(t / 2)), std::cos(t / 2)); }
inline Mat ry(double t) { return m2(std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2)); }
inline Mat rz(double t) { return m2(std::polar(1.0, -t / 2), 0.0, 0.0, std::polar(1.0, t / 2)); }
inline Mat u3(double t, double p, double l) {
  return m2(std::cos(t / 2), -std::polar(1.0, l) * std::sin(t / 2), std::polar(1.0, p) * std::sin(t / 2),
            std::polar(1.0, p + l) * std::cos(t / 2));
}

/// Controlled-U in the (control, target) basis with the control as the high bit.
inline Mat controlled(const Mat& u) {
  Mat m = Mat::Identity(4, 4);
  m.block(2, 2, 2, 2) = u;
  return m;
}

/// Embeds a k-qubit matrix whose local index lists `targets[0]` as the most
/// significant bit.
inline Mat embed(const Mat& g, const std::vector<int>& targets, int n) {
  const int dim = 1 << n;
  const int k = static_cast<int>(targets.size());
  int mask = 0;
  for (int t : targets) mask |= 1 << t;
  const auto local = [&](int i) {
    int v = 0;
    for (int b = 0; b < k; ++b) v = (v << 1) | ((i >> targets[b]) & 1);
    return v;
  };
  Mat full = Mat::Zero(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      if ((r & ~mask) == (c & ~mask)) full(r, c) = g(local(r), local(c));
  return full;
}

inline Mat gate_matrix(const ucvqa::GateDescriptor& g, const std::vector<double>& params, int n) {
  using ucvqa::GateKind;
  double a = 0.0;
  if (g.param_slot) {
    a = params[static_cast<std::size_t>(*g.param_slot)];
    if (g.adjoint) a = -a;
  } else if (!g.fixed_params.empty()) {
    a = g.fixed_params[0];
  }
  const double h = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::H: return embed(m2(h, h, h, -h), g.targets, n);
    case GateKind::X: return embed(m2(0, 1, 1, 0), g.targets, n);
    case GateKind::RX: return embed(rx(a), g.targets, n);
    case GateKind::RY: return embed(ry(a), g.targets, n);
    case GateKind::RZ: return embed(rz(a), g.targets, n);
    case GateKind::CZ: return embed(controlled(m2(1, 0, 0, -1)), g.targets, n);
    case GateKind::CNOT: return embed(controlled(m2(0, 1, 1, 0)), g.targets, n);
    case GateKind::CRY:
    case GateKind::CF: return embed(controlled(ry(a)), g.targets, n);
    case GateKind::U3: return embed(u3(g.fixed_params[0], g.fixed_params[1], g.fixed_params[2]), g.targets, n);
    case GateKind::DenseUnitary: {
      // The library's dense matrices index targets[0] as the least significant bit.
      std::vector<int> rev(g.targets.rbegin(), g.targets.rend());
      return embed(*g.matrix, rev, n);
    }
  }
  return Mat::Identity(1 << n, 1 << n);
}

inline Mat unitary(const ucvqa::Circuit& c, const std::vector<double>& params) {
  Mat u = Mat::Identity(1 << c.n_qubits, 1 << c.n_qubits);
  for (const auto& g : c.gates) u = gate_matrix(g, params, c.n_qubits) * u;
  return u;
}

inline Vec run(const ucvqa::Circuit& c, const std::vector<double>& params = {}) {
  Vec v = Vec::Zero(1 << c.n_qubits);
  v(0) = 1.0;
  return unitary(c, params) * v;
}

/// Random circuit over the full gate set with `m` parametric slots.
inline ucvqa::Circuit random_circuit(int n, int n_gates, std::mt19937_64& rng) {
  using ucvqa::GateKind;
  ucvqa::CircuitBuilder b(n, ucvqa::CircuitKind::custom);
  std::uniform_int_distribution<int> pick(0, n >= 2 ? 8 : 4);
  std::uniform_int_distribution<int> qubit(0, n - 1);
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  const auto two = [&] {
    int a = qubit(rng);
    int c = qubit(rng);
    while (c == a) c = qubit(rng);
    return std::vector<int>{a, c};
  };
  for (int i = 0; i < n_gates; ++i) {
    switch (pick(rng)) {
      case 0: b.rotation(GateKind::RX, {qubit(rng)}); break;
      case 1: b.rotation(GateKind::RY, {qubit(rng)}); break;
      case 2: b.rotation(GateKind::RZ, {qubit(rng)}); break;
      case 3: b.gate(GateKind::H, {qubit(rng)}); break;
      case 4: b.fixed(ucvqa::make_fixed_gate(GateKind::U3, {qubit(rng)}, {angle(rng), angle(rng), angle(rng)})); break;
      case 5: b.rotation(GateKind::CRY, two()); break;
      case 6: b.gate(GateKind::CZ, two()); break;
      case 7: b.gate(GateKind::CNOT, two()); break;
      default: b.fixed(ucvqa::make_fixed_gate(GateKind::CF, two(), {angle(rng)})); break;
    }
  }
  return std::move(b).build();
}

}  // namespace oracle
