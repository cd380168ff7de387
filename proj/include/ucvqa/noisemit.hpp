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

// Readout noise: each measured bit flips independently with probability eps.
// The channel acts on outcome distributions, never on amplitudes.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "ucvqa/error.hpp"
#include "ucvqa/random.hpp"
#include "ucvqa/simcore.hpp"

namespace ucvqa {

inline constexpr int kMaxCalibrationQubits = 7;
inline constexpr double kMaxConditionNumber = 1e12;

struct ReadoutNoiseModel {
  double epsilon = 0.0;
};

inline void check_epsilon(double eps) {
  if (!(eps >= 0.0 && eps < 0.5)) fail(ErrorKind::range, fmt::format("readout error {} outside [0, 0.5)", eps));
}

namespace detail {

inline int log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) fail(ErrorKind::size, "distribution length is not a power of two");
  return std::countr_zero(n);
}

}  // namespace detail

/// Applies the per-qubit flip channel [[1-e, e], [e, 1-e]] to every qubit.
inline std::vector<double> apply_readout_noise(std::span<const double> probs, double eps) {
  check_epsilon(eps);
  const int n = detail::log2_exact(probs.size());
  std::vector<double> p(probs.begin(), probs.end());
  if (eps == 0.0) return p;
  for (int q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i & bit) continue;
      const double a = p[i];
      const double b = p[i | bit];
      p[i] = (1.0 - eps) * a + eps * b;
      p[i | bit] = eps * a + (1.0 - eps) * b;
    }
  }
  return p;
}

/// Probability of reading all zeros after the flip channel, without forming
/// the full noisy distribution.
inline double noisy_zero_probability(std::span<const double> probs, double eps) {
  check_epsilon(eps);
  const int n = detail::log2_exact(probs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const int w = std::popcount(i);
    total += probs[i] * std::pow(eps, w) * std::pow(1.0 - eps, n - w);
  }
  return total;
}

/// Shot-level channel: each recorded outcome is redistributed over flip
/// patterns with its exact noisy distribution.
inline std::vector<std::int64_t> apply_readout_noise(std::span<const std::int64_t> counts, double eps,
                                                     Rng& rng) {
  check_epsilon(eps);
  detail::log2_exact(counts.size());
  std::vector<std::int64_t> out(counts.size(), 0);
  std::vector<double> basis(counts.size(), 0.0);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    basis.assign(counts.size(), 0.0);
    basis[j] = 1.0;
    const auto col = apply_readout_noise(basis, eps);
    const auto k = sample_multinomial(col, counts[j], rng);
    for (std::size_t i = 0; i < k.size(); ++i) out[i] += k[i];
  }
  return out;
}

/// Column j holds the measured distribution when basis state j is prepared.
struct CalibrationMatrix {
  int n_qubits = 1;
  Eigen::MatrixXd matrix;
};

/// `shots == 0` builds the exact matrix; otherwise each column is the
/// empirical frequency of `shots` noisy readouts of its basis state.
inline CalibrationMatrix build_calibration_matrix(int n, double eps, std::int64_t shots, Rng& rng) {
  if (n < 1 || n > kMaxCalibrationQubits)
    fail(ErrorKind::size, fmt::format("calibration supports 1..{} qubits", kMaxCalibrationQubits));
  if (shots < 0) fail(ErrorKind::range, "calibration shots must be >= 0");
  check_epsilon(eps);
  const std::size_t dim = std::size_t{1} << n;
  CalibrationMatrix cal{n, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))};
  std::vector<double> basis(dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    basis.assign(dim, 0.0);
    basis[j] = 1.0;
    auto col = apply_readout_noise(basis, eps);
    if (shots > 0) {
      const auto k = sample_multinomial(col, shots, rng);
      for (std::size_t i = 0; i < dim; ++i) col[i] = static_cast<double>(k[i]) / static_cast<double>(shots);
    }
    for (std::size_t i = 0; i < dim; ++i)
      cal.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return cal;
}

inline CalibrationMatrix build_calibration_matrix(int n, double eps) {
  Rng unused(0);
  return build_calibration_matrix(n, eps, 0, unused);
}

/// Inverts the calibration, clips negative entries and renormalizes.
class Mitigator {
 public:
  explicit Mitigator(const CalibrationMatrix& cal) : n_qubits_(cal.n_qubits) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cal.matrix);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    condition_ = smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
    if (!(condition_ < kMaxConditionNumber))
      fail(ErrorKind::conditioning, fmt::format("calibration matrix is singular (condition number {:.3g})", condition_));
    lu_ = cal.matrix.partialPivLu();
  }

  double condition_number() const { return condition_; }

  std::vector<double> operator()(std::span<const double> noisy) const {
    if (noisy.size() != static_cast<std::size_t>(lu_.rows()))
      fail(ErrorKind::size, "distribution length does not match the calibration matrix");
    const Eigen::Map<const Eigen::VectorXd> p(noisy.data(), static_cast<Eigen::Index>(noisy.size()));
    Eigen::VectorXd x = lu_.solve(p);
    x = x.cwiseMax(0.0);
    const double total = x.sum();
    if (total > 0.0) x /= total;
    return {x.data(), x.data() + x.size()};
  }

  int n_qubits() const { return n_qubits_; }

 private:
  int n_qubits_;
  double condition_ = 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

inline std::vector<double> mitigate(std::span<const double> noisy, const CalibrationMatrix& cal) {
  return Mitigator(cal)(noisy);
}

/// Row-major CSV, one row per measured outcome.
inline std::string calibration_csv(const CalibrationMatrix& cal) {
  std::string out;
  for (Eigen::Index r = 0; r < cal.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < cal.matrix.cols(); ++c) {
      if (c) out += ',';
      out += fmt::format("{}", cal.matrix(r, c));
    }
    out += '\n';
  }
  return out;
}

}  // namespace ucvqa
