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

// Experiment drivers. Every unit of work (N, L, trial) seeds its own
// generator from the master seed, so sweeps are order independent.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "ucvqa/ansatz.hpp"
#include "ucvqa/circuit.hpp"
#include "ucvqa/error.hpp"
#include "ucvqa/noisemit.hpp"
#include "ucvqa/objective.hpp"
#include "ucvqa/optimize.hpp"
#include "ucvqa/random.hpp"
#include "ucvqa/shadow.hpp"
#include "ucvqa/simcore.hpp"

namespace ucvqa {

enum class Experiment { qsp, qst, qst1q, bp_scan, mitigation, shadow_compare };

constexpr std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::qsp: return "qsp";
    case Experiment::qst: return "qst";
    case Experiment::qst1q: return "qst1q";
    case Experiment::bp_scan: return "bp_scan";
    case Experiment::mitigation: return "mitigation";
    case Experiment::shadow_compare: return "shadow_compare";
  }
  return "?";
}

inline Experiment experiment_from_string(std::string_view s) {
  for (auto e : {Experiment::qsp, Experiment::qst, Experiment::qst1q, Experiment::bp_scan,
                 Experiment::mitigation, Experiment::shadow_compare})
    if (to_string(e) == s) return e;
  fail(ErrorKind::config, "unknown experiment '" + std::string(s) + "'");
}

struct IntRange {
  int lo = 1;
  int hi = 1;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::qsp;
  CircuitKind ansatz = CircuitKind::graph_star;
  CircuitKind target = CircuitKind::ghz_target;
  IntRange qubits{3, 3};
  IntRange layers{2, 2};
  bool optimal_layers = false;
  std::vector<OptimizerKind> optimizers{OptimizerKind::qng};
  std::int64_t shots = 10000;  // 0 selects exact evaluation
  int iterations = 400;
  std::vector<double> noise{0.0};
  bool mitigate = false;
  std::int64_t calibration_shots = 0;
  int trials = 5;
  std::uint64_t seed = 20260101;
  std::string out;
  std::string trace_dir;
  int samples = 200;                // bp_scan draws per N
  std::int64_t snapshots = 100000;  // shadow R
  int shadow_runs = 10;
};

/// Desk-scale defaults for each experiment.
inline ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::qsp:
      break;
    case Experiment::qst:
      c.ansatz = CircuitKind::w_chain;
      c.target = CircuitKind::haar_target;
      c.qubits = {2, 2};
      c.layers = {1, 1};
      c.optimizers = {OptimizerKind::adam};
      break;
    case Experiment::qst1q:
      c.ansatz = CircuitKind::custom;
      c.target = CircuitKind::custom;
      c.qubits = {1, 1};
      c.layers = {1, 1};
      c.shots = 0;
      c.iterations = 100;
      c.optimizers = {OptimizerKind::sgd, OptimizerKind::qng};
      break;
    case Experiment::bp_scan:
      c.ansatz = CircuitKind::linear;
      c.qubits = {2, 8};
      c.layers = {2, 2};
      c.shots = 0;
      c.trials = 1;
      break;
    case Experiment::mitigation:
      c.qubits = {5, 5};
      c.noise = {0.0, 0.01, 0.02, 0.03, 0.04};
      c.trials = 3;
      break;
    case Experiment::shadow_compare:
      c.ansatz = CircuitKind::w_chain;
      c.target = CircuitKind::haar_target;
      c.qubits = {2, 2};
      c.layers = {1, 1};
      c.optimizers = {OptimizerKind::adam};
      break;
  }
  return c;
}

struct SweepRecord {
  std::string experiment;
  int n = 0;
  int l = 0;
  std::string optimizer;
  std::string metric;  // distance | fidelity | variance | slope
  double value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
};

using TraceSink = std::function<void(const std::string& name, const TrainTrace&)>;

// ---------------------------------------------------------------------------
// Optimal layer counts for the tomography ansatzes, N = 2..5

inline int optimal_layers(CircuitKind structure, OptimizerKind opt, int n) {
  static constexpr int kTable[3][3][4] = {
      {{2, 3, 5, 5}, {1, 2, 3, 4}, {1, 1, 3, 4}},  // chain: sgd, adam, qng
      {{3, 5, 5, 5}, {1, 3, 4, 5}, {1, 2, 4, 4}},  // alternating
      {{3, 5, 5, 5}, {1, 2, 3, 3}, {2, 3, 4, 5}},  // all-to-all
  };
  int s = 0;
  switch (structure) {
    case CircuitKind::w_chain: s = 0; break;
    case CircuitKind::w_alternating: s = 1; break;
    case CircuitKind::w_all_to_all: s = 2; break;
    default: fail(ErrorKind::config, "optimal layers exist only for tomography ansatzes");
  }
  if (n < 2 || n > 5) fail(ErrorKind::config, fmt::format("no optimal layer entry for N={}", n));
  return kTable[s][static_cast<int>(opt)][n - 2];
}

// ---------------------------------------------------------------------------
// Validation

inline void validate(const ExperimentConfig& c) {
  const auto bad = [](const std::string& msg) { fail(ErrorKind::config, msg); };
  if (c.qubits.lo < 1 || c.qubits.lo > c.qubits.hi) bad("qubit range is empty");
  if (c.layers.lo < 1 || c.layers.lo > c.layers.hi) bad("layer range is empty");
  if (c.optimizers.empty()) bad("no optimizer selected");
  if (c.shots < 0) bad("shots must be >= 0");
  if (c.iterations < 1) bad("iterations must be >= 1");
  if (c.trials < 1) bad("trials must be >= 1");
  if (c.noise.empty()) bad("noise grid is empty");
  for (double e : c.noise)
    if (!(e >= 0.0 && e < 0.5)) bad(fmt::format("noise {} outside [0, 0.5)", e));
  if (c.calibration_shots < 0) bad("calibration shots must be >= 0");
  switch (c.experiment) {
    case Experiment::qsp:
    case Experiment::mitigation:
      if (!is_qsp_kind(c.ansatz)) bad(fmt::format("{} is not a preparation ansatz", to_string(c.ansatz)));
      if (c.target != CircuitKind::ghz_target && c.target != CircuitKind::w_target) bad("target must be ghz or w");
      if (c.qubits.lo < 2 || c.qubits.hi > kMaxQubits) bad("preparation needs 2..12 qubits");
      if ((c.mitigate || c.experiment == Experiment::mitigation) && c.qubits.hi > kMaxCalibrationQubits)
        bad("mitigation supports at most 7 qubits");
      break;
    case Experiment::qst:
    case Experiment::shadow_compare:
      if (!is_qst_kind(c.ansatz)) bad(fmt::format("{} is not a tomography ansatz", to_string(c.ansatz)));
      if (c.qubits.lo < 2 || c.qubits.hi > kMaxHaarQubits) bad("tomography needs 2..6 qubits");
      if (c.optimal_layers && (c.qubits.lo < 2 || c.qubits.hi > 5)) bad("optimal layers cover N = 2..5 only");
      if (c.mitigate && c.qubits.hi > kMaxCalibrationQubits) bad("mitigation supports at most 7 qubits");
      if (c.experiment == Experiment::shadow_compare) {
        if (c.snapshots < 1) bad("snapshots must be >= 1");
        if (c.shadow_runs < 2) bad("shadow runs must be >= 2");
      }
      break;
    case Experiment::qst1q:
      if (c.qubits.lo != 1 || c.qubits.hi != 1) bad("qst1q is a single-qubit experiment");
      break;
    case Experiment::bp_scan:
      if (!is_qsp_kind(c.ansatz)) bad(fmt::format("{} is not a preparation ansatz", to_string(c.ansatz)));
      if (c.target != CircuitKind::ghz_target && c.target != CircuitKind::w_target) bad("target must be ghz or w");
      if (c.qubits.lo < 2 || c.qubits.hi > kMaxQubits) bad("bp_scan needs 2..12 qubits");
      if (c.samples < 2) bad("bp_scan needs at least two samples per N");
      break;
  }
}

// ---------------------------------------------------------------------------
// Helpers

namespace detail {

inline std::string short_name(CircuitKind k) {
  switch (k) {
    case CircuitKind::ghz_target: return "ghz";
    case CircuitKind::w_target: return "w";
    case CircuitKind::haar_target: return "haar";
    default: return std::string(to_string(k));
  }
}

inline OptimizerConfig optimizer_config(const ExperimentConfig& c, OptimizerKind k) {
  OptimizerConfig o;
  o.kind = k;
  o.max_iterations = c.iterations;
  return o;
}

inline std::string trace_name(const std::string& id, int n, int l, OptimizerKind opt, int trial) {
  return fmt::format("{}/N={}/L={}/{}/trial={}", id, n, l, to_string(opt), trial);
}

inline void emit(const TraceSink& sink, const std::string& name, const TrainTrace& t) {
  if (sink) sink(name, t);
}

inline std::vector<int> layer_values(const ExperimentConfig& c, OptimizerKind opt, int n) {
  if (c.optimal_layers) return {optimal_layers(c.ansatz, opt, n)};
  std::vector<int> out;
  for (int l = c.layers.lo; l <= c.layers.hi; ++l) out.push_back(l);
  return out;
}

/// Random single-qubit target: theta = arccos(1 - 2u) and uniform phases.
inline Circuit random_u3(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double theta = std::acos(1.0 - 2.0 * unit(rng));
  const double phi = angle(rng);
  const double lambda = angle(rng);
  return u3_circuit(theta, phi, lambda);
}

struct TomographyRun {
  TrainTrace trace;
  double fidelity = 0.0;
  double distance = 1.0;
  StateVector truth{1};
  StateVector reconstructed{1};
};

/// Trains V^dagger(theta) against the prepared target and reconstructs
/// V(theta*)|0>.
inline TomographyRun tomography_run(const Circuit& target, const Circuit& vdag, const ExperimentConfig& c,
                                    double eps, OptimizerKind opt, Rng& rng, std::uint64_t cal_seed) {
  CompilationProblem problem(target, vdag, c.shots, {eps, c.mitigate, c.calibration_shots}, cal_seed);
  const auto init = uniform_angles(static_cast<std::size_t>(vdag.n_params), rng);
  std::vector<double> full(init.begin(), init.end());
  TomographyRun r;
  r.trace = train(problem, optimizer_config(c, opt), full, rng);
  r.truth = run(target);
  r.reconstructed = run(inverse(vdag), r.trace.final_params);
  r.fidelity = fidelity(r.truth, r.reconstructed);
  r.distance = final_distance(problem, r.trace.final_params);
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Drivers

/// Trains U(theta) against a fixed GHZ or W preparation and records the final
/// distance for every (N, L, optimizer, noise, trial).
inline std::vector<SweepRecord> run_qsp(const ExperimentConfig& c, const TraceSink& sink = {}) {
  validate(c);
  std::vector<SweepRecord> out;
  const std::string base = fmt::format("qsp/{}/{}", detail::short_name(c.ansatz), detail::short_name(c.target));
  for (int n = c.qubits.lo; n <= c.qubits.hi; ++n) {
    const Circuit vdag = inverse(build_target(c.target, n));
    for (int l = c.layers.lo; l <= c.layers.hi; ++l) {
      const Circuit u = build_qsp_ansatz({c.ansatz, n, l});
      for (double eps : c.noise)
        for (auto opt : c.optimizers)
          for (int trial = 0; trial < c.trials; ++trial) {
            std::string id = base;
            if (eps > 0.0) id += fmt::format("/eps={}/{}", eps, c.mitigate ? "mitigated" : "unmitigated");
            const std::uint64_t seed = derive_seed(c.seed, base, {n, l, trial});
            Rng rng(seed);
            CompilationProblem problem(u, vdag, c.shots, {eps, c.mitigate, c.calibration_shots}, rng());
            const auto init = uniform_angles(static_cast<std::size_t>(u.n_params), rng);
            const auto trace = train(problem, detail::optimizer_config(c, opt), init, rng);
            detail::emit(sink, detail::trace_name(id, n, l, opt, trial), trace);
            out.push_back({id, n, l, std::string(to_string(opt)), "distance",
                           final_distance(problem, trace.final_params), trial, seed});
          }
    }
  }
  return out;
}

/// Tomography of Haar-random states (or random single-qubit U3 states for
/// qst1q). Records the fidelity between the true and reconstructed states and
/// the final distance.
inline std::vector<SweepRecord> run_qst(const ExperimentConfig& c, const TraceSink& sink = {}) {
  validate(c);
  std::vector<SweepRecord> out;
  const double eps = c.noise.front();
  if (c.experiment == Experiment::qst1q) {
    const std::string id = "qst1q";
    const Circuit vdag = single_qubit_tomography_ansatz();
    for (auto opt : c.optimizers)
      for (int trial = 0; trial < c.trials; ++trial) {
        const std::uint64_t seed = derive_seed(c.seed, id, {1, 1, trial});
        Rng rng(seed);
        const Circuit target = detail::random_u3(rng);
        const auto cal_seed = rng();
        const auto r = detail::tomography_run(target, vdag, c, eps, opt, rng, cal_seed);
        detail::emit(sink, detail::trace_name(id, 1, 1, opt, trial), r.trace);
        out.push_back({id, 1, 1, std::string(to_string(opt)), "fidelity", r.fidelity, trial, seed});
        out.push_back({id, 1, 1, std::string(to_string(opt)), "distance", r.distance, trial, seed});
      }
    return out;
  }
  const std::string id = fmt::format("qst/{}", detail::short_name(c.ansatz));
  for (int n = c.qubits.lo; n <= c.qubits.hi; ++n)
    for (auto opt : c.optimizers)
      for (int l : detail::layer_values(c, opt, n)) {
        const Circuit vdag = build_qst_ansatz({c.ansatz, n, l});
        for (int trial = 0; trial < c.trials; ++trial) {
          const std::uint64_t seed = derive_seed(c.seed, id, {n, l, trial});
          Rng rng(seed);
          const Circuit target = dense_circuit(haar_unitary(n, rng));
          const auto cal_seed = rng();
          const auto r = detail::tomography_run(target, vdag, c, eps, opt, rng, cal_seed);
          detail::emit(sink, detail::trace_name(id, n, l, opt, trial), r.trace);
          out.push_back({id, n, l, std::string(to_string(opt)), "fidelity", r.fidelity, trial, seed});
          out.push_back({id, n, l, std::string(to_string(opt)), "distance", r.distance, trial, seed});
        }
      }
  return out;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorKind::size, "fit inputs differ in length");
  if (x.size() < 3) fail(ErrorKind::fit, "need at least three points for a slope fit");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) fail(ErrorKind::fit, "degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

struct BpScanResult {
  std::vector<SweepRecord> records;
  std::vector<int> n_values;
  std::vector<double> variances;
  double slope = 0.0;
};

/// Variance of dC/dtheta_1 at uniformly random parameters, per N, and the
/// slope of ln Var against N.
inline BpScanResult bp_scan(const ExperimentConfig& c) {
  validate(c);
  if (c.qubits.hi - c.qubits.lo + 1 < 3) fail(ErrorKind::fit, "bp_scan needs at least three qubit counts");
  BpScanResult res;
  const std::string id = fmt::format("bp_scan/{}", detail::short_name(c.ansatz));
  const int l = c.layers.lo;
  std::vector<double> xs, ys;
  for (int n = c.qubits.lo; n <= c.qubits.hi; ++n) {
    CompilationProblem problem(build_qsp_ansatz({c.ansatz, n, l}), inverse(build_target(c.target, n)), 0);
    const std::uint64_t seed = derive_seed(c.seed, id, {n, l, 0});
    Rng rng(seed);
    std::vector<double> d(static_cast<std::size_t>(c.samples));
    for (auto& v : d) {
      const auto params = uniform_angles(static_cast<std::size_t>(problem.n_params()), rng);
      const double cst = cost(problem.p0(params, rng));
      v = cst < kCostGuard ? 0.0 : -p0_derivative(problem, params, 0, rng) / (2.0 * cst);
    }
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= static_cast<double>(d.size());
    double var = 0.0;
    for (double v : d) var += (v - mean) * (v - mean);
    var /= static_cast<double>(d.size() - 1);
    res.n_values.push_back(n);
    res.variances.push_back(var);
    xs.push_back(n);
    ys.push_back(std::log(var));
    res.records.push_back({id, n, l, "exact", "variance", var, 0, seed});
  }
  res.slope = least_squares(xs, ys).slope;
  res.records.push_back({id, 0, l, "exact", "slope", res.slope, 0, c.seed});
  return res;
}

/// Paired noisy runs with and without calibration-matrix mitigation; every
/// noise level and both arms share the same initial parameters per trial.
inline std::vector<SweepRecord> mitigation_demo(const ExperimentConfig& c, const TraceSink& sink = {}) {
  validate(c);
  std::vector<SweepRecord> out;
  const std::string base =
      fmt::format("mitigation/{}/{}", detail::short_name(c.ansatz), detail::short_name(c.target));
  for (int n = c.qubits.lo; n <= c.qubits.hi; ++n) {
    const Circuit vdag = inverse(build_target(c.target, n));
    for (int l = c.layers.lo; l <= c.layers.hi; ++l) {
      const Circuit u = build_qsp_ansatz({c.ansatz, n, l});
      for (double eps : c.noise)
        for (bool mit : {false, true})
          for (auto opt : c.optimizers)
            for (int trial = 0; trial < c.trials; ++trial) {
              const std::string id = fmt::format("mitigation/eps={}/{}", eps, mit ? "mitigated" : "unmitigated");
              const std::uint64_t seed = derive_seed(c.seed, base, {n, l, trial});
              Rng rng(seed);
              CompilationProblem problem(u, vdag, c.shots, {eps, mit, c.calibration_shots}, rng());
              const auto init = uniform_angles(static_cast<std::size_t>(u.n_params), rng);
              const auto trace = train(problem, detail::optimizer_config(c, opt), init, rng);
              detail::emit(sink, detail::trace_name(id, n, l, opt, trial), trace);
              out.push_back({id, n, l, std::string(to_string(opt)), "distance",
                             final_distance(problem, trace.final_params), trial, seed});
            }
    }
  }
  return out;
}

struct ShadowCompareResult {
  std::vector<SweepRecord> records;
  double shadow_variance = 0.0;       // last N
  double variational_variance = 0.0;  // last N
};

/// Variance of the <Z...Z> estimate from classical shadows versus the trained
/// variational reconstruction, on the same Haar states.
inline ShadowCompareResult shadow_compare(const ExperimentConfig& c, const TraceSink& sink = {}) {
  validate(c);
  ShadowCompareResult res;
  const std::string base = "shadow_compare";
  const double eps = c.noise.front();
  for (int n = c.qubits.lo; n <= c.qubits.hi; ++n)
    for (auto opt : c.optimizers) {
      const int l = detail::layer_values(c, opt, n).front();
      const Circuit vdag = build_qst_ansatz({c.ansatz, n, l});
      double var_sum = 0.0;
      double shadow_sum = 0.0;
      for (int trial = 0; trial < c.trials; ++trial) {
        const std::uint64_t seed = derive_seed(c.seed, base, {n, l, trial});
        Rng rng(seed);
        const Circuit target = dense_circuit(haar_unitary(n, rng));
        const auto cal_seed = rng();
        const auto r = detail::tomography_run(target, vdag, c, eps, opt, rng, cal_seed);
        detail::emit(sink, detail::trace_name(base + "/variational", n, l, opt, trial), r.trace);
        const double truth = expectation_global_z(r.truth);
        const double z_var = expectation_global_z(r.reconstructed);
        var_sum += (z_var - truth) * (z_var - truth);
        std::vector<std::uint64_t> seeds(static_cast<std::size_t>(c.shadow_runs));
        for (auto& s : seeds) s = rng();
        const auto z = shadow_run_estimates(target, c.snapshots, seeds);
        shadow_sum += mean_squared_deviation(z, truth);
      }
      res.variational_variance = var_sum / c.trials;
      res.shadow_variance = shadow_sum / c.trials;
      const double r = static_cast<double>(c.snapshots);
      const std::string o(to_string(opt));
      res.records.push_back({base + "/variational", n, l, o, "variance", res.variational_variance, 0, c.seed});
      res.records.push_back({base + "/shadow", n, l, o, "variance", res.shadow_variance, 0, c.seed});
      res.records.push_back({base + "/sql", n, l, o, "variance", 1.0 / r, 0, c.seed});
      res.records.push_back({base + "/hl", n, l, o, "variance", 1.0 / (r * r), 0, c.seed});
    }
  return res;
}

inline std::vector<SweepRecord> run_experiment(const ExperimentConfig& c, const TraceSink& sink = {}) {
  switch (c.experiment) {
    case Experiment::qsp: return run_qsp(c, sink);
    case Experiment::qst:
    case Experiment::qst1q: return run_qst(c, sink);
    case Experiment::bp_scan: return bp_scan(c).records;
    case Experiment::mitigation: return mitigation_demo(c, sink);
    case Experiment::shadow_compare: return shadow_compare(c, sink).records;
  }
  return {};
}

// ---------------------------------------------------------------------------
// CSV output

inline void sort_records(std::vector<SweepRecord>& records) {
  const auto key = [](const SweepRecord& r) {
    return std::tie(r.experiment, r.n, r.l, r.optimizer, r.metric, r.trial, r.seed, r.value);
  };
  std::sort(records.begin(), records.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
}

inline void write_sweep_csv(std::ostream& os, std::vector<SweepRecord> records) {
  sort_records(records);
  os << "experiment,N,L,optimizer,metric,value,trial,seed\n";
  for (const auto& r : records)
    os << fmt::format("{},{},{},{},{},{},{},{}\n", r.experiment, r.n, r.l, r.optimizer, r.metric, r.value,
                      r.trial, r.seed);
}

// ---------------------------------------------------------------------------
// Textual configuration

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  T v{};
  const auto t = trim(s);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size() || t.empty())
    fail(ErrorKind::config, fmt::format("bad value '{}' for {}", s, what));
  return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool parse_bool(std::string_view s, std::string_view what) {
  const auto t = trim(s);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  fail(ErrorKind::config, fmt::format("bad boolean '{}' for {}", s, what));
}

}  // namespace detail

/// "A..B" or a single integer "A".
inline IntRange parse_range(std::string_view s, std::string_view what) {
  const auto pos = s.find("..");
  if (pos == std::string_view::npos) {
    const int v = detail::parse_number<int>(s, what);
    return {v, v};
  }
  return {detail::parse_number<int>(s.substr(0, pos), what), detail::parse_number<int>(s.substr(pos + 2), what)};
}

inline CircuitKind parse_ansatz(std::string_view s) {
  const auto t = detail::trim(s);
  static const std::map<std::string, CircuitKind, std::less<>> aliases{
      {"polygon", CircuitKind::graph_polygon}, {"star", CircuitKind::graph_star},
      {"chain", CircuitKind::w_chain},         {"alternating", CircuitKind::w_alternating},
      {"all_to_all", CircuitKind::w_all_to_all},
  };
  if (auto it = aliases.find(t); it != aliases.end()) return it->second;
  try {
    const auto k = circuit_kind_from_string(t);
    if (is_qsp_kind(k) || is_qst_kind(k)) return k;
  } catch (const Error&) {
  }
  fail(ErrorKind::config, "unknown ansatz '" + t + "'");
}

inline CircuitKind parse_target(std::string_view s) {
  const auto t = detail::trim(s);
  if (t == "ghz" || t == "ghz_target") return CircuitKind::ghz_target;
  if (t == "w" || t == "w_target") return CircuitKind::w_target;
  if (t == "haar" || t == "haar_target") return CircuitKind::haar_target;
  fail(ErrorKind::config, "unknown target '" + t + "'");
}

inline std::vector<OptimizerKind> parse_optimizers(std::string_view s) {
  std::vector<OptimizerKind> out;
  for (const auto& part : detail::split(s, ',')) {
    try {
      out.push_back(optimizer_kind_from_string(part));
    } catch (const Error&) {
      fail(ErrorKind::config, "unknown optimizer '" + part + "'");
    }
  }
  return out;
}

inline std::vector<double> parse_noise(std::string_view s) {
  std::vector<double> out;
  for (const auto& part : detail::split(s, ',')) out.push_back(detail::parse_number<double>(part, "noise"));
  return out;
}

/// Applies one `key = value` setting. Keys match the long CLI flag names.
inline void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  const auto k = detail::trim(key);
  if (k == "qubits") c.qubits = parse_range(value, k);
  else if (k == "layers") {
    if (detail::trim(value) == "optimal") c.optimal_layers = true;
    else {
      c.layers = parse_range(value, k);
      c.optimal_layers = false;
    }
  } else if (k == "ansatz") c.ansatz = parse_ansatz(value);
  else if (k == "target") c.target = parse_target(value);
  else if (k == "optimizer") c.optimizers = parse_optimizers(value);
  else if (k == "shots") c.shots = detail::parse_number<std::int64_t>(value, k);
  else if (k == "iterations") c.iterations = detail::parse_number<int>(value, k);
  else if (k == "noise") c.noise = parse_noise(value);
  else if (k == "mitigate") c.mitigate = detail::parse_bool(value, k);
  else if (k == "calibration-shots") c.calibration_shots = detail::parse_number<std::int64_t>(value, k);
  else if (k == "trials") c.trials = detail::parse_number<int>(value, k);
  else if (k == "seed") c.seed = detail::parse_number<std::uint64_t>(value, k);
  else if (k == "out") c.out = detail::trim(value);
  else if (k == "trace-dir") c.trace_dir = detail::trim(value);
  else if (k == "exact") { if (detail::parse_bool(value, k)) c.shots = 0; }
  else if (k == "samples") c.samples = detail::parse_number<int>(value, k);
  else if (k == "snapshots") c.snapshots = detail::parse_number<std::int64_t>(value, k);
  else if (k == "shadow-runs") c.shadow_runs = detail::parse_number<int>(value, k);
  else fail(ErrorKind::config, "unknown setting '" + k + "'");
}

/// INI-style text: `key = value` lines, `#` or `;` comments, section headers
/// ignored.
inline void apply_ini(ExperimentConfig& c, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';' || t[0] == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(ErrorKind::config, fmt::format("line {}: expected key = value", lineno));
    apply_setting(c, t.substr(0, eq), t.substr(eq + 1));
  }
}

}  // namespace ucvqa
