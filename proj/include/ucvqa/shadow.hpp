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

// Classical shadows from random single-qubit Pauli measurements.
//
// Each snapshot picks X, Y or Z uniformly per qubit, rotates that axis onto Z
// (X: H, Y: S^dagger then H) and records one computational-basis shot. The
// per-qubit inverted channel is 3 U^dagger|b><b|U - I.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "ucvqa/circuit.hpp"
#include "ucvqa/error.hpp"
#include "ucvqa/random.hpp"
#include "ucvqa/simcore.hpp"

namespace ucvqa {

enum class PauliBasis : std::uint8_t { X, Y, Z };

inline constexpr int kMaxShadowDenseQubits = 4;

/// `bases[q]` is the basis measured on qubit q; `outcome` bit q is its result.
struct ShadowSnapshot {
  std::vector<PauliBasis> bases;
  std::size_t outcome = 0;
};

struct ShadowEstimate {
  double z_hat = 0.0;
  std::int64_t n_snapshots = 0;
};

/// One log line per snapshot; both strings list qubit n-1 first.
inline std::string to_string(const ShadowSnapshot& s) {
  const int n = static_cast<int>(s.bases.size());
  std::string b(s.bases.size(), 'Z');
  for (int q = 0; q < n; ++q) b[static_cast<std::size_t>(n - 1 - q)] = "XYZ"[static_cast<int>(s.bases[static_cast<std::size_t>(q)])];
  return fmt::format("bases={} outcome={}", b, format_outcome(s.outcome, n));
}

/// Samples snapshots of a fixed state. Outcome distributions are cached per
/// basis pattern.
class PauliShadowSampler {
 public:
  explicit PauliShadowSampler(StateVector state) : state_(std::move(state)) {
    n_ = state_.n_qubits();
    std::size_t patterns = 1;
    for (int q = 0; q < n_; ++q) patterns *= 3;
    cdf_.resize(patterns);
  }

  int n_qubits() const { return n_; }

  ShadowSnapshot draw(Rng& rng) {
    std::uniform_int_distribution<int> axis(0, 2);
    ShadowSnapshot s;
    s.bases.resize(static_cast<std::size_t>(n_));
    std::size_t pattern = 0;
    for (int q = n_ - 1; q >= 0; --q) {
      const int a = axis(rng);
      s.bases[static_cast<std::size_t>(q)] = static_cast<PauliBasis>(a);
      pattern = pattern * 3 + static_cast<std::size_t>(a);
    }
    const auto& cdf = distribution(pattern, s.bases);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng) * cdf.back();
    s.outcome = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
    s.outcome = std::min(s.outcome, cdf.size() - 1);
    return s;
  }

  /// Mean of R single-snapshot estimates of <Z...Z>.
  double z_hat(std::int64_t r, Rng& rng);

 private:
  const std::vector<double>& distribution(std::size_t pattern, const std::vector<PauliBasis>& bases) {
    auto& cdf = cdf_[pattern];
    if (!cdf.empty()) return cdf;
    StateVector st = state_;
    const Mat2 sdg{1.0, 0.0, 0.0, cplx{0.0, -1.0}};
    for (int q = 0; q < n_; ++q) {
      const auto b = bases[static_cast<std::size_t>(q)];
      if (b == PauliBasis::Y) kernel::apply_1q(st, q, sdg);
      if (b != PauliBasis::Z) kernel::apply_1q(st, q, mat2::hadamard());
    }
    cdf = probabilities(st);
    for (std::size_t i = 1; i < cdf.size(); ++i) cdf[i] += cdf[i - 1];
    return cdf;
  }

  StateVector state_;
  int n_ = 1;
  std::vector<std::vector<double>> cdf_;
};

inline double snapshot_global_z(const ShadowSnapshot& s) {
  double v = 1.0;
  for (std::size_t q = 0; q < s.bases.size(); ++q) {
    if (s.bases[q] != PauliBasis::Z) return 0.0;
    v *= (s.outcome >> q) & 1U ? -3.0 : 3.0;
  }
  return v;
}

inline double PauliShadowSampler::z_hat(std::int64_t r, Rng& rng) {
  if (r < 1) fail(ErrorKind::range, "need at least one snapshot");
  double sum = 0.0;
  for (std::int64_t i = 0; i < r; ++i) sum += snapshot_global_z(draw(rng));
  return sum / static_cast<double>(r);
}

inline std::vector<ShadowSnapshot> collect_pauli_snapshots(const Circuit& prep, std::int64_t r, Rng& rng,
                                                           std::span<const double> params = {}) {
  if (r < 1) fail(ErrorKind::range, "need at least one snapshot");
  PauliShadowSampler sampler(run(prep, params));
  std::vector<ShadowSnapshot> out;
  out.reserve(static_cast<std::size_t>(r));
  for (std::int64_t i = 0; i < r; ++i) out.push_back(sampler.draw(rng));
  return out;
}

/// 3 U^dagger|b><b|U - I for one qubit.
inline Eigen::Matrix2cd snapshot_factor(PauliBasis basis, int bit) {
  Eigen::Vector2cd v;
  const double h = mat2::kInvSqrt2;
  const double sgn = bit ? -1.0 : 1.0;
  switch (basis) {
    case PauliBasis::Z: v = bit ? Eigen::Vector2cd(0.0, 1.0) : Eigen::Vector2cd(1.0, 0.0); break;
    case PauliBasis::X: v = Eigen::Vector2cd(h, sgn * h); break;
    case PauliBasis::Y: v = Eigen::Vector2cd(h, cplx{0.0, sgn * h}); break;
  }
  return 3.0 * v * v.adjoint() - Eigen::Matrix2cd::Identity();
}

/// Dense shadow estimate of rho: mean over snapshots of the tensor product of
/// per-qubit factors (qubit 0 as the least significant index).
inline Eigen::MatrixXcd reconstruct_pauli(std::span<const ShadowSnapshot> snapshots) {
  if (snapshots.empty()) fail(ErrorKind::range, "no snapshots");
  const int n = static_cast<int>(snapshots.front().bases.size());
  if (n < 1 || n > kMaxShadowDenseQubits)
    fail(ErrorKind::size, fmt::format("dense reconstruction supports 1..{} qubits", kMaxShadowDenseQubits));
  std::map<std::pair<std::vector<PauliBasis>, std::size_t>, std::int64_t> tally;
  for (const auto& s : snapshots) {
    if (static_cast<int>(s.bases.size()) != n) fail(ErrorKind::size, "snapshots of different sizes");
    ++tally[{s.bases, s.outcome}];
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [key, count] : tally) {
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = n - 1; q >= 0; --q) {
      const Eigen::Matrix2cd f = snapshot_factor(key.first[static_cast<std::size_t>(q)],
                                                 static_cast<int>((key.second >> q) & 1U));
      Eigen::MatrixXcd next(term.rows() * 2, term.cols() * 2);
      for (Eigen::Index i = 0; i < term.rows(); ++i)
        for (Eigen::Index j = 0; j < term.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = term(i, j) * f;
      term = std::move(next);
    }
    rho += static_cast<double>(count) * term;
  }
  return rho / static_cast<double>(snapshots.size());
}

inline ShadowEstimate predict_global_z(std::span<const ShadowSnapshot> snapshots) {
  if (snapshots.empty()) fail(ErrorKind::range, "no snapshots");
  double sum = 0.0;
  for (const auto& s : snapshots) sum += snapshot_global_z(s);
  return {sum / static_cast<double>(snapshots.size()), static_cast<std::int64_t>(snapshots.size())};
}

/// z_hat of one R-snapshot run per seed.
inline std::vector<double> shadow_run_estimates(const Circuit& prep, std::int64_t r,
                                                std::span<const std::uint64_t> seeds,
                                                std::span<const double> params = {}) {
  PauliShadowSampler sampler(run(prep, params));
  std::vector<double> out;
  out.reserve(seeds.size());
  for (auto seed : seeds) {
    Rng rng(seed);
    out.push_back(sampler.z_hat(r, rng));
  }
  return out;
}

inline double mean_squared_deviation(std::span<const double> values, double reference) {
  if (values.empty()) fail(ErrorKind::range, "no values");
  double s = 0.0;
  for (double v : values) s += (v - reference) * (v - reference);
  return s / static_cast<double>(values.size());
}

/// Mean of (z_hat - <Z...Z>)^2 over independent R-snapshot runs, with the
/// exact expectation taken from the prepared state.
inline double estimator_variance(const Circuit& prep, std::int64_t r, int runs, Rng& rng,
                                 std::span<const double> params = {}) {
  if (runs < 2) fail(ErrorKind::range, "estimator_variance needs at least two runs");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(runs));
  for (auto& s : seeds) s = rng();
  const auto z = shadow_run_estimates(prep, r, seeds, params);
  return mean_squared_deviation(z, expectation_global_z(run(prep, params)));
}

}  // namespace ucvqa
