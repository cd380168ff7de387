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

// Compilation objective: p0 = |<0|V^dagger U|0>|^2 and the Fubini-Study cost
// C = sqrt(1 - p0), with parameter-shift gradients.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "ucvqa/circuit.hpp"
#include "ucvqa/error.hpp"
#include "ucvqa/noisemit.hpp"
#include "ucvqa/random.hpp"
#include "ucvqa/simcore.hpp"

namespace ucvqa {

/// Four-term shift constants for controlled rotations.
struct GradientRuleConstants {
  double s = std::numbers::pi / 2.0;
  double d_plus = (std::numbers::sqrt2 + 1.0) / (4.0 * std::numbers::sqrt2);
  double d_minus = (std::numbers::sqrt2 - 1.0) / (4.0 * std::numbers::sqrt2);
  double alpha_shift = std::numbers::pi / 2.0;
  double beta_shift = 3.0 * std::numbers::pi / 2.0;
};

inline constexpr double kCostGuard = 1e-8;

struct ReadoutOptions {
  double epsilon = 0.0;
  bool mitigate = false;
  std::int64_t calibration_shots = 0;  // 0 builds the calibration exactly
};

/// U followed by V^dagger on |0...0>. The parameter vector holds U's slots
/// first, then V^dagger's.
class CompilationProblem {
 public:
  CompilationProblem(Circuit u, Circuit vdag, std::int64_t shots = 0, ReadoutOptions readout = {},
                     std::optional<std::uint64_t> calibration_seed = std::nullopt)
      : u_(std::move(u)), vdag_(std::move(vdag)), shots_(shots), readout_(readout) {
    if (u_.n_qubits != vdag_.n_qubits) fail(ErrorKind::size, "U and V^dagger act on different registers");
    if (shots_ < 0) fail(ErrorKind::range, "shots must be >= 0");
    check_epsilon(readout_.epsilon);
    validate(u_);
    validate(vdag_);
    joint_.n_qubits = u_.n_qubits;
    joint_.n_params = u_.n_params + vdag_.n_params;
    joint_.kind_tag = CircuitKind::custom;
    joint_.gates = u_.gates;
    joint_.layers = u_.layers;
    for (auto g : vdag_.gates) {
      if (g.param_slot) *g.param_slot += u_.n_params;
      joint_.gates.push_back(std::move(g));
    }
    for (auto layer : vdag_.layers) {
      for (auto& s : layer) s += u_.n_params;
      joint_.layers.push_back(std::move(layer));
    }
    if (readout_.epsilon > 0.0 && readout_.mitigate) {
      Rng cal_rng(calibration_seed.value_or(0));
      calibration_ = build_calibration_matrix(n_qubits(), readout_.epsilon, readout_.calibration_shots, cal_rng);
      mitigator_.emplace(*calibration_);
    }
  }

  const Circuit& u() const { return u_; }
  const Circuit& vdag() const { return vdag_; }
  const Circuit& joint() const { return joint_; }
  int n_qubits() const { return u_.n_qubits; }
  int n_params() const { return joint_.n_params; }
  std::int64_t shots() const { return shots_; }
  const ReadoutOptions& readout() const { return readout_; }
  const std::optional<CalibrationMatrix>& calibration() const { return calibration_; }
  const GradientRuleConstants& rules() const { return rules_; }

  void set_shots(std::int64_t shots) {
    if (shots < 0) fail(ErrorKind::range, "shots must be >= 0");
    shots_ = shots;
  }
  void set_two_term_shift(double s) {
    if (std::abs(std::sin(s)) < 1e-6) fail(ErrorKind::range, "two-term shift must satisfy sin(s) != 0");
    rules_.s = s;
  }

  /// p0 through the full pipeline: exact or sampled, with readout noise and
  /// optional mitigation.
  double p0(std::span<const double> params, Rng& rng) const {
    const auto probs = probabilities(run(joint_, params));
    const double eps = readout_.epsilon;
    if (shots_ == 0) {
      if (eps == 0.0) return probs[0];
      if (mitigator_) return (*mitigator_)(apply_readout_noise(probs, eps))[0];
      return noisy_zero_probability(probs, eps);
    }
    const double n = static_cast<double>(shots_);
    if (!mitigator_) {
      const double p = eps == 0.0 ? probs[0] : noisy_zero_probability(probs, eps);
      return static_cast<double>(sample_binomial(shots_, p, rng)) / n;
    }
    const auto k = sample_multinomial(apply_readout_noise(probs, eps), shots_, rng);
    std::vector<double> freq(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) freq[i] = static_cast<double>(k[i]) / n;
    return (*mitigator_)(freq)[0];
  }

  /// Pipeline p0 evaluated on exact probabilities (no shot noise).
  double exact_p0(std::span<const double> params) const {
    CompilationProblem exact = *this;
    exact.shots_ = 0;
    Rng unused(0);
    return exact.p0(params, unused);
  }

 private:
  Circuit u_;
  Circuit vdag_;
  Circuit joint_;
  std::int64_t shots_ = 0;
  ReadoutOptions readout_;
  std::optional<CalibrationMatrix> calibration_;
  std::optional<Mitigator> mitigator_;
  GradientRuleConstants rules_;
};

inline double estimate_p0(const CompilationProblem& problem, std::span<const double> params, Rng& rng) {
  check_arity(problem.joint(), params);
  return problem.p0(params, rng);
}

inline double estimate_p0(const CompilationProblem& problem, std::span<const double> params) {
  check_arity(problem.joint(), params);
  return problem.exact_p0(params);
}

struct CostValue {
  double value = 1.0;
  bool clamped = false;
};

inline CostValue cost_checked(double p0) {
  CostValue c;
  if (p0 < 0.0 || p0 > 1.0) {
    c.clamped = true;
    p0 = std::clamp(p0, 0.0, 1.0);
  }
  c.value = std::sqrt(1.0 - p0);
  return c;
}

inline double cost(double p0) { return cost_checked(p0).value; }

/// Distance reported for a finished run: pipeline cost without shot noise.
inline double final_distance(const CompilationProblem& problem, std::span<const double> params) {
  return cost(estimate_p0(problem, params));
}

inline double fidelity(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) fail(ErrorKind::size, "fidelity of states with different sizes");
  cplx overlap{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::norm(overlap);
}

struct GradientResult {
  std::vector<double> grad;
  bool converged = false;
  double cost = 1.0;
  double p0 = 0.0;
};

/// d p0 / d theta_slot by the gate's shift rule; each shifted evaluation draws
/// fresh shots.
inline double p0_derivative(const CompilationProblem& problem, std::span<const double> params, int slot,
                            Rng& rng) {
  const auto& c = problem.joint();
  check_arity(c, params);
  if (slot < 0 || slot >= c.n_params) fail(ErrorKind::index, "parameter slot out of range");
  const GateDescriptor* g = nullptr;
  for (const auto& gate : c.gates)
    if (gate.param_slot == slot) g = &gate;
  std::vector<double> shifted(params.begin(), params.end());
  const auto at = [&](double delta) {
    shifted[static_cast<std::size_t>(slot)] = params[static_cast<std::size_t>(slot)] + delta;
    return problem.p0(shifted, rng);
  };
  const auto& r = problem.rules();
  switch (g->shift_rule) {
    case ShiftRule::two_term:
      return (at(r.s) - at(-r.s)) / (2.0 * std::sin(r.s));
    case ShiftRule::four_term:
      return r.d_plus * (at(r.alpha_shift) - at(-r.alpha_shift)) -
             r.d_minus * (at(r.beta_shift) - at(-r.beta_shift));
    case ShiftRule::none:
      break;
  }
  fail(ErrorKind::structure, "parametric gate without a shift rule");
}

/// Gradient of C = sqrt(1 - p0): component j is -(dp0/dtheta_j) / (2C).
/// Returns the zero vector with `converged` set when C < 1e-8.
inline GradientResult gradient(const CompilationProblem& problem, std::span<const double> params, Rng& rng) {
  check_arity(problem.joint(), params);
  GradientResult out;
  out.p0 = problem.p0(params, rng);
  out.cost = cost(out.p0);
  out.grad.assign(params.size(), 0.0);
  if (out.cost < kCostGuard) {
    out.converged = true;
    return out;
  }
  for (int j = 0; j < problem.n_params(); ++j)
    out.grad[static_cast<std::size_t>(j)] = -p0_derivative(problem, params, j, rng) / (2.0 * out.cost);
  return out;
}

inline GradientResult gradient(const CompilationProblem& problem, std::span<const double> params) {
  CompilationProblem exact = problem;
  exact.set_shots(0);
  Rng unused(0);
  return gradient(exact, params, unused);
}

}  // namespace ucvqa
