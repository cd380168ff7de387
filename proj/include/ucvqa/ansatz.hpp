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

// Trainable ansatzes and fixed target circuits.
//
// Preparation ansatzes (applied to |0...0> and compared against a target):
//   linear        RX each | CRY ring ascending | RZ each | CRY ring descending
//                 (control/target swapped) | RZ each                 5NL params
//   graph_polygon RY each | CZ ring in three rounds | RY each        2NL params
//   graph_star    per edge (0,k): RY(0) RY(k) CZ(0,k)                (2N-2)L params
//
// Tomography ansatzes (the trainable adjoint V^dagger): per layer an
// entangler of CRY gates followed by RZ, RX, RZ on every qubit.
//   w_chain       CRY ring                                           4NL params
//   w_alternating nearest-neighbour pairs, offset by layer parity    floor(NL/2)+3NL (even N)
//   w_all_to_all  every pair i<j                                     N(N+5)L/2 params

#pragma once

#include <string>
#include <vector>

#include "ucvqa/circuit.hpp"
#include "ucvqa/error.hpp"
#include "ucvqa/simcore.hpp"

namespace ucvqa {

struct AnsatzSpec {
  CircuitKind kind = CircuitKind::linear;
  int n_qubits = 2;
  int n_layers = 1;
};

namespace detail {

inline void check_spec(const AnsatzSpec& spec) {
  if (spec.n_qubits < 2 || spec.n_qubits > kMaxQubits)
    fail(ErrorKind::size, "entangling ansatz needs 2.." + std::to_string(kMaxQubits) + " qubits");
  if (spec.n_layers < 1) fail(ErrorKind::size, "ansatz needs at least one layer");
}

inline void rotation_round(CircuitBuilder& b, GateKind kind, int n) {
  for (int q = 0; q < n; ++q) b.rotation(kind, {q});
}

/// Polygon edges ordered as three rounds; consecutive rounds collide on a
/// qubit so each round occupies its own time step.
inline std::vector<std::pair<int, int>> polygon_edges(int n) {
  if (n == 2) return {{0, 1}};
  std::vector<std::pair<int, int>> edges;
  const int first = n % 2 == 0 ? 1 : 0;
  for (int i = first; i + 1 < n - (first == 1 ? 1 : 0); i += 2) edges.emplace_back(i, i + 1);
  for (int i = 1 - first; i + 1 < n; i += 2) edges.emplace_back(i, i + 1);
  edges.emplace_back(n - 1, 0);
  return edges;
}

}  // namespace detail

inline Circuit build_qsp_ansatz(const AnsatzSpec& spec) {
  detail::check_spec(spec);
  const int n = spec.n_qubits;
  CircuitBuilder b(n, spec.kind);
  switch (spec.kind) {
    case CircuitKind::linear:
      for (int l = 0; l < spec.n_layers; ++l) {
        detail::rotation_round(b, GateKind::RX, n);
        for (int i = 0; i < n; ++i) b.rotation(GateKind::CRY, {i, (i + 1) % n});
        detail::rotation_round(b, GateKind::RZ, n);
        for (int i = n - 1; i >= 0; --i) b.rotation(GateKind::CRY, {(i + 1) % n, i});
        detail::rotation_round(b, GateKind::RZ, n);
      }
      break;
    case CircuitKind::graph_polygon: {
      const auto edges = detail::polygon_edges(n);
      for (int l = 0; l < spec.n_layers; ++l) {
        detail::rotation_round(b, GateKind::RY, n);
        for (auto [a, c] : edges) b.gate(GateKind::CZ, {a, c});
        detail::rotation_round(b, GateKind::RY, n);
      }
      break;
    }
    case CircuitKind::graph_star:
      for (int l = 0; l < spec.n_layers; ++l)
        for (int k = 1; k < n; ++k) {
          b.rotation(GateKind::RY, {0});
          b.rotation(GateKind::RY, {k});
          b.gate(GateKind::CZ, {0, k});
        }
      break;
    default:
      fail(ErrorKind::kind, std::string(to_string(spec.kind)) + " is not a preparation ansatz");
  }
  return std::move(b).build();
}

inline Circuit build_qst_ansatz(const AnsatzSpec& spec) {
  detail::check_spec(spec);
  const int n = spec.n_qubits;
  CircuitBuilder b(n, spec.kind);
  for (int l = 0; l < spec.n_layers; ++l) {
    switch (spec.kind) {
      case CircuitKind::w_chain:
        for (int i = 0; i < n; ++i) b.rotation(GateKind::CRY, {i, (i + 1) % n});
        break;
      case CircuitKind::w_alternating: {
        const int offset = l % 2;
        for (int i = offset; i + 1 < n; i += 2) b.rotation(GateKind::CRY, {i, i + 1});
        if (offset == 1 && n % 2 == 0) b.rotation(GateKind::CRY, {n - 1, 0});
        break;
      }
      case CircuitKind::w_all_to_all:
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) b.rotation(GateKind::CRY, {i, j});
        break;
      default:
        fail(ErrorKind::kind, std::string(to_string(spec.kind)) + " is not a tomography ansatz");
    }
    b.close_layer();
    detail::rotation_round(b, GateKind::RZ, n);
    detail::rotation_round(b, GateKind::RX, n);
    detail::rotation_round(b, GateKind::RZ, n);
  }
  return std::move(b).build();
}

/// Parameter-free circuits preparing GHZ or W states from |0...0>.
inline Circuit build_target(CircuitKind kind, int n) {
  if (n < 2 || n > kMaxQubits) fail(ErrorKind::size, "target circuits need at least two qubits");
  CircuitBuilder b(n, kind);
  switch (kind) {
    case CircuitKind::ghz_target:
      b.gate(GateKind::H, {0});
      for (int q = 0; q + 1 < n; ++q) b.gate(GateKind::CNOT, {q, q + 1});
      break;
    case CircuitKind::w_target:
      // Excitation moves down the register; CF(k) leaves amplitude 1/sqrt(k)
      // behind at each step.
      b.gate(GateKind::X, {0});
      for (int q = 0; q + 1 < n; ++q) {
        b.fixed(make_fixed_gate(GateKind::CF, {q, q + 1}, {f_gate_angle(n - q)}));
        b.gate(GateKind::CNOT, {q + 1, q});
      }
      break;
    default:
      fail(ErrorKind::kind, std::string(to_string(kind)) + " is not a target kind");
  }
  return std::move(b).build();
}

inline Circuit u3_circuit(double theta, double phi, double lambda) {
  CircuitBuilder b(1, CircuitKind::custom);
  b.fixed(make_fixed_gate(GateKind::U3, {0}, {theta, phi, lambda}));
  return std::move(b).build();
}

/// Trainable adjoint for single-qubit tomography: RZ, RX, RZ in that order.
inline Circuit single_qubit_tomography_ansatz() {
  CircuitBuilder b(1, CircuitKind::custom);
  b.rotation(GateKind::RZ, {0});
  b.rotation(GateKind::RX, {0});
  b.rotation(GateKind::RZ, {0});
  return std::move(b).build();
}

inline Circuit dense_circuit(const UnitaryMatrix& u, CircuitKind kind = CircuitKind::haar_target) {
  int n = 0;
  while ((Eigen::Index{1} << n) < u.rows()) ++n;
  if ((Eigen::Index{1} << n) != u.rows() || n < 1) fail(ErrorKind::size, "matrix is not 2^n square");
  std::vector<int> targets(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) targets[static_cast<std::size_t>(q)] = q;
  CircuitBuilder b(n, kind);
  b.fixed(make_dense_gate(std::move(targets), u));
  return std::move(b).build();
}

inline bool is_qsp_kind(CircuitKind k) {
  return k == CircuitKind::linear || k == CircuitKind::graph_polygon || k == CircuitKind::graph_star;
}
inline bool is_qst_kind(CircuitKind k) {
  return k == CircuitKind::w_chain || k == CircuitKind::w_alternating ||
         k == CircuitKind::w_all_to_all;
}

inline Circuit build_ansatz(const AnsatzSpec& spec) {
  if (is_qsp_kind(spec.kind)) return build_qsp_ansatz(spec);
  if (is_qst_kind(spec.kind)) return build_qst_ansatz(spec);
  fail(ErrorKind::kind, std::string(to_string(spec.kind)) + " is not an ansatz kind");
}

}  // namespace ucvqa
