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

#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "ucvqa/error.hpp"
#include "ucvqa/simcore.hpp"

namespace ucvqa {

enum class CircuitKind {
  linear,
  graph_polygon,
  graph_star,
  w_chain,
  w_alternating,
  w_all_to_all,
  ghz_target,
  w_target,
  haar_target,
  custom,
};

constexpr std::string_view to_string(CircuitKind k) {
  switch (k) {
    case CircuitKind::linear: return "linear";
    case CircuitKind::graph_polygon: return "graph_polygon";
    case CircuitKind::graph_star: return "graph_star";
    case CircuitKind::w_chain: return "w_chain";
    case CircuitKind::w_alternating: return "w_alternating";
    case CircuitKind::w_all_to_all: return "w_all_to_all";
    case CircuitKind::ghz_target: return "ghz_target";
    case CircuitKind::w_target: return "w_target";
    case CircuitKind::haar_target: return "haar_target";
    case CircuitKind::custom: return "custom";
  }
  return "?";
}

inline CircuitKind circuit_kind_from_string(std::string_view s) {
  for (auto k : {CircuitKind::linear, CircuitKind::graph_polygon, CircuitKind::graph_star,
                 CircuitKind::w_chain, CircuitKind::w_alternating, CircuitKind::w_all_to_all,
                 CircuitKind::ghz_target, CircuitKind::w_target, CircuitKind::haar_target,
                 CircuitKind::custom})
    if (to_string(k) == s) return k;
  fail(ErrorKind::kind, "unknown circuit kind '" + std::string(s) + "'");
}

/// Ordered gate list plus parameter bookkeeping.
///
/// `layers` groups parameter slots into blocks of mutually commuting gates
/// (disjoint qubit supports, adjacent in gate order); the quantum natural
/// gradient treats each block as one diagonal block of the metric.
struct Circuit {
  int n_qubits = 1;
  std::vector<GateDescriptor> gates;
  int n_params = 0;
  std::vector<std::vector<int>> layers;
  CircuitKind kind_tag = CircuitKind::custom;
};

/// Appends gates while assigning parameter slots in gate order. A parametric
/// gate joins the open layer when its qubits are disjoint from the layer's;
/// any fixed gate closes the layer.
class CircuitBuilder {
 public:
  CircuitBuilder(int n_qubits, CircuitKind kind) {
    c_.n_qubits = n_qubits;
    c_.kind_tag = kind;
  }

  int rotation(GateKind kind, std::vector<int> targets) {
    const int slot = c_.n_params++;
    const bool fits = layer_open_ && std::none_of(targets.begin(), targets.end(), [&](int q) {
                        return std::find(layer_qubits_.begin(), layer_qubits_.end(), q) !=
                               layer_qubits_.end();
                      });
    if (!fits) {
      c_.layers.emplace_back();
      layer_qubits_.clear();
      layer_open_ = true;
    }
    c_.layers.back().push_back(slot);
    layer_qubits_.insert(layer_qubits_.end(), targets.begin(), targets.end());
    c_.gates.push_back(make_param_gate(kind, std::move(targets), slot));
    return slot;
  }

  void fixed(GateDescriptor g) {
    if (g.parametric()) fail(ErrorKind::structure, "use rotation() for parametric gates");
    close_layer();
    c_.gates.push_back(std::move(g));
  }

  void gate(GateKind kind, std::vector<int> targets) { fixed(make_gate(kind, std::move(targets))); }

  void close_layer() {
    layer_open_ = false;
    layer_qubits_.clear();
  }

  Circuit build() && { return std::move(c_); }

 private:
  Circuit c_;
  bool layer_open_ = false;
  std::vector<int> layer_qubits_;
};

inline void validate(const Circuit& c) {
  if (c.n_qubits < 1 || c.n_qubits > kMaxQubits) fail(ErrorKind::size, "bad qubit count");
  std::vector<int> seen(static_cast<std::size_t>(c.n_params), 0);
  for (const auto& g : c.gates) {
    for (std::size_t i = 0; i < g.targets.size(); ++i) {
      if (g.targets[i] < 0 || g.targets[i] >= c.n_qubits) fail(ErrorKind::index, "target out of range");
      for (std::size_t j = 0; j < i; ++j)
        if (g.targets[i] == g.targets[j]) fail(ErrorKind::index, "repeated target qubit");
    }
    if (g.parametric()) {
      const int s = *g.param_slot;
      if (s < 0 || s >= c.n_params) fail(ErrorKind::structure, "parameter slot out of range");
      ++seen[static_cast<std::size_t>(s)];
      if (g.shift_rule != default_shift_rule(g.kind))
        fail(ErrorKind::structure, "shift rule does not match gate kind");
    } else if (g.shift_rule != ShiftRule::none) {
      fail(ErrorKind::structure, "fixed gate carries a shift rule");
    }
  }
  for (int v : seen)
    if (v != 1) fail(ErrorKind::structure, "every parameter slot must appear in exactly one gate");
  std::vector<int> in_layer(static_cast<std::size_t>(c.n_params), 0);
  for (const auto& layer : c.layers)
    for (int s : layer) {
      if (s < 0 || s >= c.n_params) fail(ErrorKind::structure, "layer slot out of range");
      ++in_layer[static_cast<std::size_t>(s)];
    }
  for (int v : in_layer)
    if (v != 1) fail(ErrorKind::structure, "layers must partition the parameter slots");
}

/// Adjoint circuit: gates reversed and individually inverted. Parametric gates
/// keep their slot and flip their `adjoint` flag.
inline Circuit inverse(const Circuit& c) {
  Circuit out;
  out.n_qubits = c.n_qubits;
  out.n_params = c.n_params;
  out.kind_tag = c.kind_tag;
  out.layers.assign(c.layers.rbegin(), c.layers.rend());
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    GateDescriptor g = *it;
    if (g.parametric()) {
      g.adjoint = !g.adjoint;
    } else if (g.kind == GateKind::U3) {
      const auto p = g.fixed_params;
      g.fixed_params = {-p[0], -p[2], -p[1]};
    } else if (g.kind == GateKind::DenseUnitary) {
      g.matrix = std::make_shared<const UnitaryMatrix>(g.matrix->adjoint());
    } else {
      for (auto& a : g.fixed_params) a = -a;
    }
    out.gates.push_back(std::move(g));
  }
  return out;
}

inline void check_arity(const Circuit& c, std::span<const double> params) {
  if (static_cast<int>(params.size()) != c.n_params)
    fail(ErrorKind::arity, "expected " + std::to_string(c.n_params) + " parameters, got " +
                               std::to_string(params.size()));
}

inline void run_on(const Circuit& c, std::span<const double> params, StateVector& st) {
  check_arity(c, params);
  if (st.n_qubits() != c.n_qubits) fail(ErrorKind::size, "state and circuit qubit counts differ");
  for (const auto& g : c.gates) {
    if (g.parametric())
      apply_gate_inplace(st, g, params[static_cast<std::size_t>(*g.param_slot)]);
    else
      apply_gate_inplace(st, g);
  }
}

inline StateVector run(const Circuit& c, std::span<const double> params = {}) {
  StateVector st = init_state(c.n_qubits);
  run_on(c, params, st);
  return st;
}

/// Number of time steps when gates are packed left to right: a gate joins
/// the current step if it touches none of the step's qubits, otherwise it
/// opens a new step.
inline int circuit_depth(const Circuit& c) {
  int depth = 0;
  std::vector<bool> busy(static_cast<std::size_t>(c.n_qubits), false);
  for (const auto& g : c.gates) {
    const bool clash = std::any_of(g.targets.begin(), g.targets.end(),
                                   [&](int q) { return busy[static_cast<std::size_t>(q)]; });
    if (clash || depth == 0) {
      ++depth;
      std::fill(busy.begin(), busy.end(), false);
    }
    for (int q : g.targets) busy[static_cast<std::size_t>(q)] = true;
  }
  return depth;
}

/// One gate per line: `KIND q0[,q1] slot=<k>|angle=<radians>`.
inline std::string to_text(const Circuit& c) {
  std::string out;
  for (const auto& g : c.gates) {
    out += gate_name(g.kind);
    out += ' ';
    for (std::size_t i = 0; i < g.targets.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(g.targets[i]);
    }
    if (g.parametric()) {
      out += fmt::format(" slot={}", *g.param_slot);
      if (g.adjoint) out += " adjoint";
    } else if (!g.fixed_params.empty()) {
      out += " angle=";
      for (std::size_t i = 0; i < g.fixed_params.size(); ++i) {
        if (i) out += ',';
        out += fmt::format("{}", g.fixed_params[i]);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace ucvqa
