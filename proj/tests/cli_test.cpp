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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#ifndef UCVQA_CLI_PATH
#error "UCVQA_CLI_PATH must name the ucvqa executable"
#endif

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

Result invoke(const std::string& args) {
  const std::string cmd = std::string(UCVQA_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ucvqa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(Cli, SmallQspRunWritesSweepCsv) {
  const auto r = invoke("qsp --qubits 2 --layers 1 --iterations 5 --trials 2 --shots 100");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("experiment,N,L,optimizer,metric,value,trial,seed\n", 0), 0u);
  EXPECT_NE(r.out.find("qsp/graph_star/ghz,2,1,qng,distance,"), std::string::npos);
}

TEST_F(Cli, ConfigErrorsExitWithTwo) {
  EXPECT_EQ(invoke("qsp --ansatz hexagon").code, 2);
  EXPECT_EQ(invoke("qsp --qubits 5..2").code, 2);
  EXPECT_EQ(invoke("qsp --noise 0.7").code, 2);
  EXPECT_EQ(invoke("qsp --frobnicate").code, 2);
  EXPECT_EQ(invoke("tomography").code, 2);
  EXPECT_EQ(invoke("").code, 2);
  EXPECT_EQ(invoke("qsp --config /nonexistent/ucvqa.ini").code, 2);
}

TEST_F(Cli, UnknownConfigKeyExitsWithTwo) {
  std::ofstream(dir_ / "bad.ini") << "colour = blue\n";
  EXPECT_EQ(invoke("qsp --config " + (dir_ / "bad.ini").string()).code, 2);
}

TEST_F(Cli, ConfigFileOverridesFlags) {
  std::ofstream(dir_ / "run.ini") << "qubits = 2\nlayers = 1\niterations = 3\ntrials = 1\nshots = 50\n";
  const auto r = invoke("qsp --qubits 4 --config " + (dir_ / "run.ini").string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("qsp/graph_star/ghz,2,1,"), std::string::npos);
  EXPECT_EQ(r.out.find(",4,"), std::string::npos);
}

TEST_F(Cli, OutFileMatchesStdout) {
  const std::string args = "qsp --qubits 2 --layers 1 --iterations 4 --trials 1 --shots 100";
  const auto r = invoke(args + " --out " + (dir_ / "s.csv").string());
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(dir_ / "s.csv"), invoke(args).out);
}

TEST_F(Cli, RerunIsBitwiseIdentical) {
  const std::string args = "qst --iterations 5 --trials 2 --shots 200 --noise 0.02 --mitigate";
  const auto a = invoke(args);
  const auto b = invoke(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, invoke(args + " --seed 3").out);
}

TEST_F(Cli, TraceDirectoryGetsOneFilePerRun) {
  const auto r = invoke("qsp --qubits 2 --layers 1 --iterations 4 --trials 2 --shots 100 --trace-dir " +
                        (dir_ / "traces").string());
  ASSERT_EQ(r.code, 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "traces")) {
    ++files;
    EXPECT_EQ(e.path().extension(), ".csv");
    EXPECT_EQ(slurp(e.path()).rfind("iteration,cost,p0,ms\n", 0), 0u);
  }
  EXPECT_EQ(files, 2);
  EXPECT_TRUE(fs::exists(dir_ / "traces" / "qsp_graph_star_ghz_N=2_L=1_qng_trial=0.csv"));
}

TEST_F(Cli, DumpCircuit) {
  const auto r = invoke("qsp --ansatz star --qubits 2 --layers 1 --dump-circuit");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "RY 0 slot=0\nRY 1 slot=1\nCZ 0,1\n");
}

TEST_F(Cli, DumpCalibration) {
  const auto r = invoke("mitigation --qubits 2 --noise 0,0.25 --dump-calibration");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "0.5625,0.1875,0.1875,0.0625\n"
            "0.1875,0.5625,0.0625,0.1875\n"
            "0.1875,0.0625,0.5625,0.1875\n"
            "0.0625,0.1875,0.1875,0.5625\n");
}

TEST_F(Cli, HelpExitsCleanly) { EXPECT_EQ(invoke("--help").code, 0); }

}  // namespace
