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

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ucvqa/ucvqa.hpp"

namespace {

using namespace ucvqa;

template <class F>
ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::size;
}

std::string csv(std::vector<SweepRecord> r) {
  std::ostringstream os;
  write_sweep_csv(os, std::move(r));
  return os.str();
}

ExperimentConfig small_qsp() {
  auto c = default_config(Experiment::qsp);
  c.qubits = {2, 3};
  c.layers = {1, 1};
  c.shots = 200;
  c.iterations = 10;
  c.trials = 2;
  return c;
}

TEST(Config, DefaultsValidate) {
  for (auto e : {Experiment::qsp, Experiment::qst, Experiment::qst1q, Experiment::bp_scan, Experiment::mitigation,
                 Experiment::shadow_compare}) {
    EXPECT_NO_THROW(validate(default_config(e))) << to_string(e);
    EXPECT_EQ(experiment_from_string(to_string(e)), e);
  }
}

TEST(Config, UnknownExperiment) {
  EXPECT_EQ(error_kind_of([] { experiment_from_string("vqe"); }), ErrorKind::config);
}

TEST(Config, Ranges) {
  const auto r = parse_range("2..5", "qubits");
  EXPECT_EQ(r.lo, 2);
  EXPECT_EQ(r.hi, 5);
  const auto s = parse_range("4", "qubits");
  EXPECT_EQ(s.lo, 4);
  EXPECT_EQ(s.hi, 4);
  EXPECT_EQ(error_kind_of([] { parse_range("a..b", "qubits"); }), ErrorKind::config);
}

TEST(Config, SettingsAndAliases) {
  auto c = default_config(Experiment::qsp);
  apply_setting(c, "ansatz", "polygon");
  apply_setting(c, "target", "w");
  apply_setting(c, "optimizer", "sgd,adam");
  apply_setting(c, "noise", "0.01,0.02");
  apply_setting(c, "seed", "7");
  EXPECT_EQ(c.ansatz, CircuitKind::graph_polygon);
  EXPECT_EQ(c.target, CircuitKind::w_target);
  EXPECT_EQ(c.optimizers, (std::vector<OptimizerKind>{OptimizerKind::sgd, OptimizerKind::adam}));
  EXPECT_EQ(c.noise, (std::vector<double>{0.01, 0.02}));
  EXPECT_EQ(c.seed, 7u);
}

TEST(Config, IniOverrides) {
  auto c = default_config(Experiment::qst);
  apply_ini(c, "# comment\n[run]\nqubits = 3\nlayers = optimal\nexact = true\nmitigate = yes\n");
  EXPECT_EQ(c.qubits.lo, 3);
  EXPECT_TRUE(c.optimal_layers);
  EXPECT_EQ(c.shots, 0);
  EXPECT_TRUE(c.mitigate);
}

TEST(Config, IniErrors) {
  auto c = default_config(Experiment::qsp);
  EXPECT_EQ(error_kind_of([&] { apply_ini(c, "colour = blue\n"); }), ErrorKind::config);
  EXPECT_EQ(error_kind_of([&] { apply_ini(c, "no equals sign\n"); }), ErrorKind::config);
  EXPECT_EQ(error_kind_of([&] { apply_ini(c, "shots = many\n"); }), ErrorKind::config);
}

TEST(Config, ValidationRejectsBadValues) {
  auto c = default_config(Experiment::qsp);
  c.ansatz = CircuitKind::w_chain;
  EXPECT_EQ(error_kind_of([&] { validate(c); }), ErrorKind::config);
  c = default_config(Experiment::qsp);
  c.noise = {0.6};
  EXPECT_EQ(error_kind_of([&] { validate(c); }), ErrorKind::config);
  c = default_config(Experiment::qsp);
  c.qubits = {4, 3};
  EXPECT_EQ(error_kind_of([&] { validate(c); }), ErrorKind::config);
  c = default_config(Experiment::mitigation);
  c.qubits = {8, 8};
  EXPECT_EQ(error_kind_of([&] { validate(c); }), ErrorKind::config);
}

TEST(OptimalLayers, TableLookups) {
  EXPECT_EQ(optimal_layers(CircuitKind::w_chain, OptimizerKind::adam, 2), 1);
  EXPECT_EQ(optimal_layers(CircuitKind::w_all_to_all, OptimizerKind::qng, 5), 5);
  EXPECT_EQ(error_kind_of([] { optimal_layers(CircuitKind::linear, OptimizerKind::qng, 3); }), ErrorKind::config);
  EXPECT_EQ(error_kind_of([] { optimal_layers(CircuitKind::w_chain, OptimizerKind::qng, 6); }), ErrorKind::config);
}

TEST(Sweep, CsvHeaderAndSorting) {
  std::vector<SweepRecord> r{{"b", 2, 1, "qng", "distance", 0.5, 1, 9}, {"a", 3, 1, "qng", "distance", 0.25, 0, 8},
                             {"b", 2, 1, "qng", "distance", 0.125, 0, 7}};
  EXPECT_EQ(csv(r),
            "experiment,N,L,optimizer,metric,value,trial,seed\n"
            "a,3,1,qng,distance,0.25,0,8\n"
            "b,2,1,qng,distance,0.125,0,7\n"
            "b,2,1,qng,distance,0.5,1,9\n");
}

TEST(Sweep, QspRecordsAreDeterministicDistances) {
  const auto c = small_qsp();
  const auto a = run_experiment(c);
  EXPECT_EQ(a.size(), 4u);
  for (const auto& r : a) {
    EXPECT_EQ(r.metric, "distance");
    EXPECT_GE(r.value, 0.0);
    EXPECT_LE(r.value, 1.0);
  }
  EXPECT_EQ(csv(a), csv(run_experiment(c)));
}

TEST(Sweep, SeedsIndependentOfSweepOrder) {
  auto wide = small_qsp();
  auto narrow = small_qsp();
  narrow.qubits = {3, 3};
  std::map<std::pair<int, int>, SweepRecord> by_point;
  for (const auto& r : run_experiment(wide)) by_point[{r.n, r.trial}] = r;
  for (const auto& r : run_experiment(narrow)) {
    const auto& w = by_point.at({r.n, r.trial});
    EXPECT_EQ(w.seed, r.seed);
    EXPECT_EQ(w.value, r.value);
  }
}

TEST(Sweep, TraceSinkNamesEveryRun) {
  auto c = small_qsp();
  std::vector<std::string> names;
  run_experiment(c, [&](const std::string& name, const TrainTrace& t) {
    names.push_back(name);
    EXPECT_FALSE(t.records.empty());
  });
  ASSERT_EQ(names.size(), 4u);
  EXPECT_EQ(names.front().rfind("qsp/graph_star/ghz/N=", 0), 0u) << names.front();
}

TEST(Sweep, NoisyQspIdsCarryArm) {
  auto c = small_qsp();
  c.qubits = {2, 2};
  c.noise = {0.02};
  c.mitigate = true;
  for (const auto& r : run_experiment(c)) EXPECT_EQ(r.experiment, "qsp/graph_star/ghz/eps=0.02/mitigated");
}

TEST(Sweep, QstEmitsFidelityAndDistance) {
  auto c = default_config(Experiment::qst);
  c.iterations = 20;
  c.trials = 2;
  std::map<std::string, int> metrics;
  for (const auto& r : run_experiment(c)) {
    ++metrics[r.metric];
    EXPECT_EQ(r.experiment, "qst/w_chain");
  }
  EXPECT_EQ(metrics["fidelity"], 2);
  EXPECT_EQ(metrics["distance"], 2);
}

TEST(Sweep, Qst1qRunsBothOptimizers) {
  auto c = default_config(Experiment::qst1q);
  c.iterations = 5;
  c.trials = 2;
  std::map<std::string, int> per_opt;
  for (const auto& r : run_experiment(c)) per_opt[r.optimizer] += r.metric == "fidelity";
  EXPECT_EQ(per_opt["sgd"], 2);
  EXPECT_EQ(per_opt["qng"], 2);
}

TEST(Compile, TargetAgainstItselfHasZeroDistance) {
  const auto v = build_target(CircuitKind::w_target, 3);
  CompilationProblem p(v, inverse(v), 1000);
  Rng rng(1);
  const auto trace = train(p, {}, std::vector<double>{}, rng);
  EXPECT_EQ(trace.records.size(), 1u);
  EXPECT_NEAR(final_distance(p, trace.final_params), 0.0, 1e-7);
}

TEST(Compile, HaarStateAgainstItselfHasUnitFidelity) {
  Rng rng(2);
  const auto u = dense_circuit(haar_unitary(3, rng));
  EXPECT_NEAR(fidelity(run(u), run(u)), 1.0, 1e-12);
  CompilationProblem p(u, inverse(u));
  EXPECT_NEAR(estimate_p0(p, {}), 1.0, 1e-12);
}

TEST(BpScan, NeedsThreePoints) {
  auto c = default_config(Experiment::bp_scan);
  c.qubits = {2, 3};
  EXPECT_EQ(error_kind_of([&] { bp_scan(c); }), ErrorKind::fit);
}

TEST(BpScan, LeastSquaresRecoversLine) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{1.5, 0.5, -0.5, -1.5};
  const auto fit = least_squares(x, y);
  EXPECT_NEAR(fit.slope, -1.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 2.5, 1e-12);
  EXPECT_EQ(error_kind_of([] { least_squares(std::vector<double>{1, 2}, std::vector<double>{1, 2}); }),
            ErrorKind::fit);
}

TEST(BpScan, RecordsPerNAndSlope) {
  auto c = default_config(Experiment::bp_scan);
  c.qubits = {2, 4};
  c.samples = 20;
  const auto res = bp_scan(c);
  ASSERT_EQ(res.variances.size(), 3u);
  for (double v : res.variances) EXPECT_GT(v, 0.0);
  EXPECT_EQ(res.records.back().metric, "slope");
  EXPECT_EQ(res.records.back().n, 0);
  EXPECT_DOUBLE_EQ(res.records.back().value, res.slope);
}

TEST(Mitigation, ZeroNoiseArmsAgree) {
  auto c = default_config(Experiment::mitigation);
  c.qubits = {3, 3};
  c.noise = {0.0};
  c.iterations = 15;
  c.trials = 1;
  std::map<std::string, double> v;
  for (const auto& r : run_experiment(c)) v[r.experiment] = r.value;
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v["mitigation/eps=0/mitigated"], v["mitigation/eps=0/unmitigated"]);
}

TEST(ShadowCompare, EmitsFourSeries) {
  auto c = default_config(Experiment::shadow_compare);
  c.iterations = 10;
  c.trials = 1;
  c.snapshots = 100;
  c.shadow_runs = 3;
  const auto res = shadow_compare(c);
  std::map<std::string, double> v;
  for (const auto& r : res.records) v[r.experiment] = r.value;
  EXPECT_DOUBLE_EQ(v["shadow_compare/sql"], 1e-2);
  EXPECT_DOUBLE_EQ(v["shadow_compare/hl"], 1e-4);
  EXPECT_DOUBLE_EQ(v["shadow_compare/shadow"], res.shadow_variance);
  EXPECT_DOUBLE_EQ(v["shadow_compare/variational"], res.variational_variance);
}

}  // namespace
