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

// ucvqa <experiment> [flags]
//
// Exit status: 0 on success, 2 on a configuration error, 1 on any other
// failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ucvqa/ucvqa.hpp"

namespace {

constexpr int kConfigError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) ucvqa::fail(ucvqa::ErrorKind::config, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string file_name(std::string name) {
  std::replace(name.begin(), name.end(), '/', '_');
  return name + ".csv";
}

ucvqa::Circuit circuit_to_dump(const ucvqa::ExperimentConfig& c) {
  using namespace ucvqa;
  if (c.experiment == Experiment::qst1q) return single_qubit_tomography_ansatz();
  const int l = c.optimal_layers ? optimal_layers(c.ansatz, c.optimizers.front(), c.qubits.lo) : c.layers.lo;
  return build_ansatz({c.ansatz, c.qubits.lo, l});
}

int run(int argc, char** argv) {
  CLI::App app{"Variational quantum compilation experiments"};
  std::string experiment;
  app.add_option("experiment", experiment, "qsp | qst | qst1q | bp_scan | mitigation | shadow_compare")
      ->required();

  // Settings are applied in command-line order after the experiment defaults.
  std::vector<std::pair<std::string, std::string>> settings;
  const auto value_flag = [&](const std::string& name, const std::string& help) {
    app.add_option_function<std::string>(
        "--" + name, [&settings, name](const std::string& v) { settings.emplace_back(name, v); }, help);
  };
  value_flag("qubits", "qubit range A..B");
  value_flag("layers", "layer range A..B, or 'optimal'");
  value_flag("ansatz", "linear | graph_polygon | graph_star | w_chain | w_alternating | w_all_to_all");
  value_flag("target", "ghz | w");
  value_flag("optimizer", "sgd | adam | qng (comma separated for several)");
  value_flag("shots", "measurement shots per evaluation");
  value_flag("iterations", "maximum training iterations");
  value_flag("noise", "readout error rate(s), comma separated");
  value_flag("trials", "trials per sweep point");
  value_flag("seed", "master seed");
  value_flag("out", "sweep CSV path (default: stdout)");
  value_flag("trace-dir", "directory for per-run trace CSVs");
  value_flag("samples", "bp_scan draws per qubit count");
  value_flag("snapshots", "shadow snapshots per run");
  value_flag("shadow-runs", "independent shadow runs per state");
  value_flag("calibration-shots", "shots per calibration column (0 = exact)");
  bool mitigate = false;
  bool exact = false;
  bool dump_circuit = false;
  bool dump_calibration = false;
  std::string config_path;
  app.add_flag("--mitigate", mitigate, "invert the readout calibration matrix");
  app.add_flag("--exact", exact, "exact probabilities instead of shots");
  app.add_flag("--dump-circuit", dump_circuit, "print the ansatz circuit and exit");
  app.add_flag("--dump-calibration", dump_calibration, "print the calibration matrix and exit");
  app.add_option("--config", config_path, "key = value file overriding flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  ucvqa::ExperimentConfig cfg;
  try {
    cfg = ucvqa::default_config(ucvqa::experiment_from_string(experiment));
    for (const auto& [k, v] : settings) ucvqa::apply_setting(cfg, k, v);
    if (mitigate) cfg.mitigate = true;
    if (exact) cfg.shots = 0;
    if (!config_path.empty()) ucvqa::apply_ini(cfg, read_file(config_path));
    ucvqa::validate(cfg);
  } catch (const ucvqa::Error& e) {
    std::cerr << "ucvqa: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (dump_circuit) {
      std::cout << ucvqa::to_text(circuit_to_dump(cfg));
      return 0;
    }
    if (dump_calibration) {
      const double eps = *std::max_element(cfg.noise.begin(), cfg.noise.end());
      ucvqa::Rng rng(cfg.seed);
      std::cout << ucvqa::calibration_csv(
          ucvqa::build_calibration_matrix(cfg.qubits.lo, eps, cfg.calibration_shots, rng));
      return 0;
    }

    ucvqa::TraceSink sink;
    if (!cfg.trace_dir.empty()) {
      std::filesystem::create_directories(cfg.trace_dir);
      sink = [dir = cfg.trace_dir](const std::string& name, const ucvqa::TrainTrace& t) {
        std::ofstream f(std::filesystem::path(dir) / file_name(name));
        ucvqa::write_trace_csv(f, t);
      };
    }
    const auto records = ucvqa::run_experiment(cfg, sink);
    if (cfg.out.empty()) {
      ucvqa::write_sweep_csv(std::cout, records);
    } else {
      std::ofstream f(cfg.out);
      if (!f) {
        std::cerr << "ucvqa: cannot write '" << cfg.out << "'\n";
        return 1;
      }
      ucvqa::write_sweep_csv(f, records);
    }
  } catch (const ucvqa::Error& e) {
    std::cerr << "ucvqa: " << ucvqa::to_string(e.kind()) << " error: " << e.what() << "\n";
    return e.kind() == ucvqa::ErrorKind::config ? kConfigError : 1;
  } catch (const std::exception& e) {
    std::cerr << "ucvqa: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
