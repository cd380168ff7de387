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
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "ucvqa/ucvqa.hpp"

namespace {

using namespace ucvqa;

Eigen::MatrixXd kron_power(const Eigen::Matrix2d& m, int n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * m;
    out = std::move(next);
  }
  return out;
}

std::vector<double> random_distribution(int n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(std::size_t{1} << n);
  for (auto& x : p) x = u(rng);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= s;
  return p;
}

TEST(Channel, ZeroEpsilonIsIdentity) {
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  EXPECT_EQ(apply_readout_noise(p, 0.0), p);
}

TEST(Channel, SingleQubitFlip) {
  const auto p = apply_readout_noise(std::vector<double>{1.0, 0.0}, 0.1);
  EXPECT_NEAR(p[0], 0.9, 1e-15);
  EXPECT_NEAR(p[1], 0.1, 1e-15);
}

TEST(Channel, AllZerosTwoQubits) {
  const auto p = apply_readout_noise(std::vector<double>{1.0, 0.0, 0.0, 0.0}, 0.1);
  EXPECT_NEAR(p[0], 0.81, 1e-15);
  EXPECT_NEAR(p[1], 0.09, 1e-15);
  EXPECT_NEAR(p[2], 0.09, 1e-15);
  EXPECT_NEAR(p[3], 0.01, 1e-15);
}

TEST(Channel, MatchesTensorPowerAndPreservesMass) {
  Rng rng(3);
  for (int n = 1; n <= 4; ++n) {
    const double eps = 0.07;
    const auto p = random_distribution(n, rng);
    const auto out = apply_readout_noise(p, eps);
    Eigen::Matrix2d a;
    a << 1 - eps, eps, eps, 1 - eps;
    const Eigen::VectorXd ref = kron_power(a, n) * Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(out[i], ref(static_cast<Eigen::Index>(i)), 1e-14);
    EXPECT_NEAR(std::accumulate(out.begin(), out.end(), 0.0), 1.0, 1e-14);
    EXPECT_NEAR(noisy_zero_probability(p, eps), out[0], 1e-14);
  }
}

TEST(Channel, EpsilonOutOfRange) {
  for (double eps : {-0.01, 0.5, 0.7}) {
    try {
      apply_readout_noise(std::vector<double>{1.0, 0.0}, eps);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::range);
    }
  }
}

TEST(Channel, ShotLevelKeepsTotalAndMean) {
  Rng rng(8);
  const std::vector<std::int64_t> counts{100000, 0, 0, 0};
  const auto out = apply_readout_noise(counts, 0.05, rng);
  EXPECT_EQ(std::accumulate(out.begin(), out.end(), std::int64_t{0}), 100000);
  EXPECT_NEAR(out[0] / 1e5, 0.9025, 4 * std::sqrt(0.9025 * 0.0975 / 1e5));
}

TEST(Calibration, ExactIsTensorPower) {
  for (int n = 1; n <= 3; ++n) {
    const auto cal = build_calibration_matrix(n, 0.02);
    Eigen::Matrix2d a;
    a << 0.98, 0.02, 0.02, 0.98;
    EXPECT_LE((cal.matrix - kron_power(a, n)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Calibration, ZeroEpsilonIsIdentity) {
  const auto cal = build_calibration_matrix(2, 0.0);
  EXPECT_TRUE(cal.matrix.isIdentity());
}

TEST(Calibration, SampledColumnsAreDistributions) {
  Rng rng(2);
  const auto cal = build_calibration_matrix(3, 0.05, 5000, rng);
  for (Eigen::Index c = 0; c < cal.matrix.cols(); ++c) {
    EXPECT_NEAR(cal.matrix.col(c).sum(), 1.0, 1e-12);
    EXPECT_GE(cal.matrix.col(c).minCoeff(), 0.0);
    EXPECT_NEAR(cal.matrix(c, c), std::pow(0.95, 3), 0.03);
  }
}

TEST(Calibration, TooManyQubits) {
  try {
    build_calibration_matrix(kMaxCalibrationQubits + 1, 0.01);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::size);
  }
}

TEST(Calibration, CsvIsRowMajor) {
  const auto cal = build_calibration_matrix(1, 0.25);
  EXPECT_EQ(calibration_csv(cal), "0.75,0.25\n0.25,0.75\n");
}

TEST(Mitigate, RoundTripRecoversDistribution) {
  Rng rng(4);
  for (int n = 1; n <= 5; ++n) {
    const auto p = random_distribution(n, rng);
    const auto cal = build_calibration_matrix(n, 0.04);
    const auto back = mitigate(apply_readout_noise(p, 0.04), cal);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(back[i], p[i], 1e-10);
  }
}

TEST(Mitigate, ClipsAndRenormalizes) {
  const auto cal = build_calibration_matrix(1, 0.1);
  const auto out = mitigate(std::vector<double>{1.0, 0.0}, cal);
  EXPECT_GE(out[1], 0.0);
  EXPECT_NEAR(out[0] + out[1], 1.0, 1e-15);
  EXPECT_NEAR(out[0], 1.0, 1e-15);
}

TEST(Mitigate, SingularCalibrationIsConditioningError) {
  CalibrationMatrix cal{1, Eigen::MatrixXd::Constant(2, 2, 0.5)};
  try {
    Mitigator m(cal);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::conditioning);
  }
}

TEST(Mitigate, ConditionNumberOfExactCalibration) {
  const Mitigator m(build_calibration_matrix(2, 0.1));
  EXPECT_NEAR(m.condition_number(), std::pow(1.0 / 0.8, 2), 1e-9);
}

TEST(Mitigate, LengthMismatch) {
  const Mitigator m(build_calibration_matrix(2, 0.1));
  try {
    m(std::vector<double>{1.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::size);
  }
}

}  // namespace
