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
#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "ucvqa/circuit.hpp"
#include "ucvqa/error.hpp"
#include "ucvqa/objective.hpp"
#include "ucvqa/random.hpp"
#include "ucvqa/simcore.hpp"

namespace ucvqa {

enum class OptimizerKind { sgd, adam, qng };

constexpr std::string_view to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::sgd: return "sgd";
    case OptimizerKind::adam: return "adam";
    case OptimizerKind::qng: return "qng";
  }
  return "?";
}

inline OptimizerKind optimizer_kind_from_string(std::string_view s) {
  for (auto k : {OptimizerKind::sgd, OptimizerKind::adam, OptimizerKind::qng})
    if (to_string(k) == s) return k;
  fail(ErrorKind::kind, "unknown optimizer '" + std::string(s) + "'");
}

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::qng;
  double learning_rate = 0.2;
  double beta1 = 0.8;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int max_iterations = 400;
  double qng_cutoff = 1e-10;
  double tolerance = 1e-4;  // stop once the cost drops below this
};

inline void validate(const OptimizerConfig& cfg) {
  if (!(cfg.learning_rate >= 0.0)) fail(ErrorKind::range, "learning rate must be non-negative");
  if (!(cfg.beta1 > 0.0 && cfg.beta1 < 1.0) || !(cfg.beta2 > 0.0 && cfg.beta2 < 1.0))
    fail(ErrorKind::range, "Adam betas must lie in (0, 1)");
  if (cfg.max_iterations < 1) fail(ErrorKind::range, "max_iterations must be >= 1");
  if (!(cfg.qng_cutoff >= 0.0)) fail(ErrorKind::range, "QNG cutoff must be non-negative");
}

namespace detail {

inline void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    fail(ErrorKind::arity, fmt::format("parameter length {} != gradient length {}", a.size(), b.size()));
}

}  // namespace detail

inline std::vector<double> sgd_step(std::span<const double> params, std::span<const double> grad,
                                    const OptimizerConfig& cfg) {
  detail::check_lengths(params, grad);
  std::vector<double> out(params.begin(), params.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= cfg.learning_rate * grad[i];
  return out;
}

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int t = 0;
};

/// Bias-corrected Adam; the step counter is incremented before use, so the
/// first update has t = 1.
inline std::pair<std::vector<double>, AdamState> adam_step(std::span<const double> params,
                                                           std::span<const double> grad, AdamState state,
                                                           const OptimizerConfig& cfg) {
  detail::check_lengths(params, grad);
  if (state.t < 0) fail(ErrorKind::range, "Adam step counter must be >= 0");
  if (state.m.empty() && state.v.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size() || state.v.size() != params.size())
    fail(ErrorKind::arity, "Adam moments do not match the parameter count");
  ++state.t;
  const double c1 = 1.0 - std::pow(cfg.beta1, state.t);
  const double c2 = 1.0 - std::pow(cfg.beta2, state.t);
  std::vector<double> out(params.begin(), params.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    out[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon);
  }
  return {std::move(out), std::move(state)};
}

// ---------------------------------------------------------------------------
// Block-diagonal Fubini-Study metric

struct MetricBlock {
  std::vector<int> slots;
  Eigen::MatrixXd g;
};

struct MetricTensor {
  int n_params = 0;
  std::vector<MetricBlock> blocks;

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_params, n_params);
    for (const auto& b : blocks)
      for (std::size_t i = 0; i < b.slots.size(); ++i)
        for (std::size_t j = 0; j < b.slots.size(); ++j)
          out(b.slots[i], b.slots[j]) = b.g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
  }
};

namespace detail {

/// K|psi> for the generator K of a parametric gate, where the gate equals
/// exp(-i theta K). Rotations use sigma/2; CRY uses |1><1|_c (x) sigma_y/2.
inline StateVector apply_generator(const StateVector& psi, const GateDescriptor& g) {
  StateVector out = psi;
  const double sign = g.adjoint ? -0.5 : 0.5;
  Mat2 sigma{};
  switch (g.kind) {
    case GateKind::RX: sigma = mat2::pauli_x(); break;
    case GateKind::RY:
    case GateKind::CRY: sigma = mat2::pauli_y(); break;
    case GateKind::RZ: sigma = mat2::pauli_z(); break;
    default: fail(ErrorKind::structure, std::string(gate_name(g.kind)) + " has no generator");
  }
  for (auto& e : sigma) e *= sign;
  if (g.kind == GateKind::CRY) {
    const std::size_t cbit = std::size_t{1} << g.targets[0];
    for (std::size_t i = 0; i < out.dim(); ++i)
      if (!(i & cbit)) out[i] = 0.0;
    kernel::apply_1q(out, g.targets[1], sigma);
  } else {
    kernel::apply_1q(out, g.targets[0], sigma);
  }
  return out;
}

inline cplx inner(const StateVector& a, const StateVector& b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline void apply_params(StateVector& st, const GateDescriptor& g, std::span<const double> params) {
  if (g.parametric())
    apply_gate_inplace(st, g, params[static_cast<std::size_t>(*g.param_slot)]);
  else
    apply_gate_inplace(st, g);
}

}  // namespace detail

/// Per layer l, g_ij = Re[<K_i K_j> - <K_i><K_j>] on the state just before the
/// layer. Each layer must be a run of adjacent parametric gates on disjoint
/// qubits, and layers must appear in gate order.
inline MetricTensor qng_metric(const Circuit& c, std::span<const double> params,
                               std::optional<StateVector> input = std::nullopt) {
  check_arity(c, params);
  if (c.n_params > 0 && c.layers.empty()) fail(ErrorKind::structure, "circuit carries no layer grouping");
  std::vector<int> gate_of_slot(static_cast<std::size_t>(c.n_params), -1);
  for (std::size_t i = 0; i < c.gates.size(); ++i)
    if (c.gates[i].parametric()) gate_of_slot[static_cast<std::size_t>(*c.gates[i].param_slot)] = static_cast<int>(i);

  StateVector st = input ? *input : init_state(c.n_qubits);
  if (st.n_qubits() != c.n_qubits) fail(ErrorKind::size, "input state does not match the circuit");
  MetricTensor out;
  out.n_params = c.n_params;
  std::size_t pos = 0;
  std::vector<int> covered(static_cast<std::size_t>(c.n_params), 0);
  for (const auto& layer : c.layers) {
    if (layer.empty()) continue;
    std::vector<int> idx;
    for (int s : layer) {
      if (s < 0 || s >= c.n_params) fail(ErrorKind::structure, "layer slot out of range");
      ++covered[static_cast<std::size_t>(s)];
      idx.push_back(gate_of_slot[static_cast<std::size_t>(s)]);
    }
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (static_cast<std::size_t>(sorted.front()) < pos)
      fail(ErrorKind::structure, "layers are not in gate order");
    for (std::size_t k = 1; k < sorted.size(); ++k)
      if (sorted[k] != sorted[k - 1] + 1) fail(ErrorKind::structure, "layer gates are not adjacent");
    std::vector<int> qubits;
    for (int gi : sorted)
      for (int q : c.gates[static_cast<std::size_t>(gi)].targets) {
        if (std::find(qubits.begin(), qubits.end(), q) != qubits.end())
          fail(ErrorKind::structure, "layer gates share a qubit");
        qubits.push_back(q);
      }

    for (; pos < static_cast<std::size_t>(sorted.front()); ++pos) detail::apply_params(st, c.gates[pos], params);

    const auto n = static_cast<Eigen::Index>(layer.size());
    std::vector<StateVector> k_psi;
    std::vector<cplx> mean;
    k_psi.reserve(layer.size());
    for (int gi : idx) {
      k_psi.push_back(detail::apply_generator(st, c.gates[static_cast<std::size_t>(gi)]));
      mean.push_back(detail::inner(st, k_psi.back()));
    }
    MetricBlock block{layer, Eigen::MatrixXd(n, n)};
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) {
        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        const double v = (detail::inner(k_psi[ui], k_psi[uj]) - mean[ui] * mean[uj]).real();
        block.g(i, j) = v;
        block.g(j, i) = v;
      }
    out.blocks.push_back(std::move(block));
    for (; pos <= static_cast<std::size_t>(sorted.back()); ++pos) detail::apply_params(st, c.gates[pos], params);
  }
  for (int v : covered)
    if (v != 1) fail(ErrorKind::structure, "layers must partition the parameter slots");
  return out;
}

/// params - alpha * g^+ grad, with the pseudo-inverse taken per block over
/// eigenvalues above the cutoff.
inline std::vector<double> qng_step(std::span<const double> params, std::span<const double> grad,
                                    const MetricTensor& metric, const OptimizerConfig& cfg) {
  detail::check_lengths(params, grad);
  if (metric.n_params != static_cast<int>(params.size()))
    fail(ErrorKind::arity, "metric does not match the parameter count");
  std::vector<double> out(params.begin(), params.end());
  for (const auto& b : metric.blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b.g);
    const auto& lam = eig.eigenvalues();
    const auto& vec = eig.eigenvectors();
    Eigen::VectorXd gb(static_cast<Eigen::Index>(b.slots.size()));
    for (std::size_t i = 0; i < b.slots.size(); ++i) gb(static_cast<Eigen::Index>(i)) = grad[static_cast<std::size_t>(b.slots[i])];
    Eigen::VectorXd coeff = vec.transpose() * gb;
    for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) = lam(i) > cfg.qng_cutoff ? coeff(i) / lam(i) : 0.0;
    const Eigen::VectorXd nat = vec * coeff;
    for (std::size_t i = 0; i < b.slots.size(); ++i)
      out[static_cast<std::size_t>(b.slots[i])] -= cfg.learning_rate * nat(static_cast<Eigen::Index>(i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Training loop

struct TraceRecord {
  int iteration = 0;
  double cost = 1.0;
  double p0 = 0.0;
  double ms = 0.0;
};

struct TrainTrace {
  std::vector<TraceRecord> records;
  std::vector<double> final_params;
  bool converged = false;

  /// First iteration whose recorded cost is below `threshold`.
  std::optional<int> iterations_to(double threshold) const {
    for (const auto& r : records)
      if (r.cost < threshold) return r.iteration;
    return std::nullopt;
  }
};

/// Each iteration records the cost at the current parameters, then steps.
/// Stops after max_iterations records, when the cost drops below tolerance,
/// or when the gradient guard fires.
inline TrainTrace train(const CompilationProblem& problem, const OptimizerConfig& cfg,
                        std::span<const double> init, Rng& rng) {
  validate(cfg);
  check_arity(problem.joint(), init);
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(clock::now() - start).count();
  };
  TrainTrace trace;
  std::vector<double> params(init.begin(), init.end());
  AdamState adam;
  if (problem.n_params() == 0) {
    const double p0 = problem.p0(params, rng);
    trace.records.push_back({0, cost(p0), p0, elapsed_ms()});
    trace.final_params = params;
    return trace;
  }
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const auto gr = gradient(problem, params, rng);
    trace.records.push_back({it, gr.cost, gr.p0, elapsed_ms()});
    if (gr.converged || gr.cost < cfg.tolerance) {
      trace.converged = true;
      break;
    }
    switch (cfg.kind) {
      case OptimizerKind::sgd: params = sgd_step(params, gr.grad, cfg); break;
      case OptimizerKind::adam: {
        auto [next, state] = adam_step(params, gr.grad, std::move(adam), cfg);
        params = std::move(next);
        adam = std::move(state);
        break;
      }
      case OptimizerKind::qng:
        params = qng_step(params, gr.grad, qng_metric(problem.joint(), params), cfg);
        break;
    }
  }
  trace.final_params = std::move(params);
  return trace;
}

inline void write_trace_csv(std::ostream& os, const TrainTrace& trace) {
  os << "iteration,cost,p0,ms\n";
  for (const auto& r : trace.records) os << fmt::format("{},{},{},{}\n", r.iteration, r.cost, r.p0, r.ms);
}

}  // namespace ucvqa
