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

// Statevector simulation of small qubit registers.
//
// Bit order: qubit q is bit q of the basis-state index (qubit 0 is the least
// significant bit). Outcome strings are written most-significant qubit first,
// so the string "001" is index 1 and has qubit 0 set.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ucvqa/error.hpp"
#include "ucvqa/random.hpp"

namespace ucvqa {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major {m00, m01, m10, m11}
using UnitaryMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 12;

class StateVector {
 public:
  explicit StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
      fail(ErrorKind::size, "qubit count " + std::to_string(n_qubits) + " outside 1.." +
                                std::to_string(kMaxQubits));
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    amps_[0] = 1.0;
  }

  StateVector(int n_qubits, std::vector<cplx> amplitudes) : StateVector(n_qubits) {
    if (amplitudes.size() != amps_.size())
      fail(ErrorKind::size, "amplitude count does not match 2^n");
    amps_ = std::move(amplitudes);
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }

  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }

  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  cplx& operator[](std::size_t i) { return amps_[i]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  void check_qubit(int q) const {
    if (q < 0 || q >= n_qubits_)
      fail(ErrorKind::index, "qubit index " + std::to_string(q) + " out of range for " +
                                 std::to_string(n_qubits_) + " qubits");
  }

 private:
  int n_qubits_;
  std::vector<cplx> amps_;
};

inline StateVector init_state(int n) { return StateVector(n); }

// ---------------------------------------------------------------------------
// Gate descriptors

enum class GateKind { H, X, RX, RY, RZ, CZ, CNOT, CRY, CF, U3, DenseUnitary };
enum class ShiftRule { none, two_term, four_term };

constexpr std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CZ: return "CZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CRY: return "CRY";
    case GateKind::CF: return "CF";
    case GateKind::U3: return "U3";
    case GateKind::DenseUnitary: return "DENSE";
  }
  return "?";
}

constexpr bool is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ || k == GateKind::CRY;
}

constexpr int gate_arity(GateKind k) {
  switch (k) {
    case GateKind::CZ:
    case GateKind::CNOT:
    case GateKind::CRY:
    case GateKind::CF: return 2;
    case GateKind::DenseUnitary: return -1;
    default: return 1;
  }
}

/// One gate in a circuit. Controlled gates list the control first.
///
/// A gate is parametric when `param_slot` is set; its angle then comes from the
/// parameter vector, negated when `adjoint` is true. Non-parametric rotations
/// carry their angle(s) in `fixed_params` (already inverted if needed).
struct GateDescriptor {
  GateKind kind = GateKind::H;
  std::vector<int> targets;
  std::optional<int> param_slot;
  std::vector<double> fixed_params;
  ShiftRule shift_rule = ShiftRule::none;
  bool adjoint = false;
  std::shared_ptr<const UnitaryMatrix> matrix;  // DenseUnitary only

  bool parametric() const { return param_slot.has_value(); }
};

constexpr ShiftRule default_shift_rule(GateKind k) {
  if (k == GateKind::CRY) return ShiftRule::four_term;
  if (k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ) return ShiftRule::two_term;
  return ShiftRule::none;
}

inline GateDescriptor make_gate(GateKind kind, std::vector<int> targets) {
  GateDescriptor g;
  g.kind = kind;
  g.targets = std::move(targets);
  return g;
}

inline GateDescriptor make_param_gate(GateKind kind, std::vector<int> targets, int slot) {
  if (!is_rotation(kind)) fail(ErrorKind::kind, std::string(gate_name(kind)) + " is not parametric");
  GateDescriptor g = make_gate(kind, std::move(targets));
  g.param_slot = slot;
  g.shift_rule = default_shift_rule(kind);
  return g;
}

inline GateDescriptor make_fixed_gate(GateKind kind, std::vector<int> targets,
                                      std::vector<double> angles) {
  GateDescriptor g = make_gate(kind, std::move(targets));
  g.fixed_params = std::move(angles);
  return g;
}

inline GateDescriptor make_dense_gate(std::vector<int> targets, UnitaryMatrix m) {
  if (m.rows() != (Eigen::Index{1} << targets.size()) || m.rows() != m.cols())
    fail(ErrorKind::size, "dense gate matrix does not match its target count");
  GateDescriptor g = make_gate(GateKind::DenseUnitary, std::move(targets));
  g.matrix = std::make_shared<const UnitaryMatrix>(std::move(m));
  return g;
}

// ---------------------------------------------------------------------------
// 2x2 building blocks

namespace mat2 {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

inline Mat2 hadamard() { return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}; }
inline Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline Mat2 pauli_y() { return {0.0, cplx{0, -1}, cplx{0, 1}, 0.0}; }
inline Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

inline Mat2 rx(double t) {
  const double c = std::cos(t / 2), s = std::sin(t / 2);
  return {c, cplx{0, -s}, cplx{0, -s}, c};
}
inline Mat2 ry(double t) {
  const double c = std::cos(t / 2), s = std::sin(t / 2);
  return {c, -s, s, c};
}
inline Mat2 rz(double t) {
  return {std::polar(1.0, -t / 2), 0.0, 0.0, std::polar(1.0, t / 2)};
}
inline Mat2 u3(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {c, -std::polar(1.0, lambda) * s, std::polar(1.0, phi) * s,
          std::polar(1.0, phi + lambda) * c};
}

inline Mat2 adjoint(const Mat2& m) {
  return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

}  // namespace mat2

// ---------------------------------------------------------------------------
// In-place kernels (bit-mask iteration; no dense embedding)

namespace kernel {

inline void apply_1q(StateVector& st, int q, const Mat2& m) {
  auto a = st.amplitudes();
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t dim = a.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx v0 = a[i], v1 = a[i + stride];
      a[i] = m[0] * v0 + m[1] * v1;
      a[i + stride] = m[2] * v0 + m[3] * v1;
    }
  }
}

inline void apply_controlled_1q(StateVector& st, int control, int target, const Mat2& m) {
  auto a = st.amplitudes();
  const std::size_t cmask = std::size_t{1} << control;
  const std::size_t stride = std::size_t{1} << target;
  const std::size_t dim = a.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      if (!(i & cmask)) continue;
      const cplx v0 = a[i], v1 = a[i + stride];
      a[i] = m[0] * v0 + m[1] * v1;
      a[i + stride] = m[2] * v0 + m[3] * v1;
    }
  }
}

inline void apply_cz(StateVector& st, int q0, int q1) {
  auto a = st.amplitudes();
  const std::size_t mask = (std::size_t{1} << q0) | (std::size_t{1} << q1);
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((i & mask) == mask) a[i] = -a[i];
}

/// Dense k-qubit unitary; local index bit b corresponds to targets[b].
inline void apply_dense(StateVector& st, std::span<const int> targets, const UnitaryMatrix& m) {
  auto a = st.amplitudes();
  const std::size_t k = targets.size();
  const std::size_t sub = std::size_t{1} << k;
  std::size_t tmask = 0;
  std::vector<std::size_t> offsets(sub, 0);
  for (std::size_t b = 0; b < k; ++b) tmask |= std::size_t{1} << targets[b];
  for (std::size_t local = 0; local < sub; ++local)
    for (std::size_t b = 0; b < k; ++b)
      if (local & (std::size_t{1} << b)) offsets[local] |= std::size_t{1} << targets[b];
  Eigen::VectorXcd in(static_cast<Eigen::Index>(sub)), out;
  for (std::size_t base = 0; base < a.size(); ++base) {
    if (base & tmask) continue;
    for (std::size_t l = 0; l < sub; ++l) in[static_cast<Eigen::Index>(l)] = a[base | offsets[l]];
    out.noalias() = m * in;
    for (std::size_t l = 0; l < sub; ++l) a[base | offsets[l]] = out[static_cast<Eigen::Index>(l)];
  }
}

}  // namespace kernel

/// Rotation angle of the F(k) gate used by the W-state cascade: RY(angle)|0>
/// has amplitude 1/sqrt(k) on |0>.
inline double f_gate_angle(int k) { return 2.0 * std::acos(1.0 / std::sqrt(static_cast<double>(k))); }

inline void validate_targets(const StateVector& st, const GateDescriptor& g) {
  const int arity = gate_arity(g.kind);
  if (arity > 0 && static_cast<int>(g.targets.size()) != arity)
    fail(ErrorKind::index, std::string(gate_name(g.kind)) + " expects " + std::to_string(arity) +
                               " target(s)");
  if (g.targets.empty()) fail(ErrorKind::index, "gate without targets");
  for (std::size_t i = 0; i < g.targets.size(); ++i) {
    st.check_qubit(g.targets[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (g.targets[i] == g.targets[j]) fail(ErrorKind::index, "repeated target qubit");
  }
}

/// Applies one gate in place. `theta` must be given exactly when the gate is
/// parametric.
inline void apply_gate_inplace(StateVector& st, const GateDescriptor& g,
                               std::optional<double> theta = std::nullopt) {
  validate_targets(st, g);
  double angle = 0.0;
  if (g.parametric()) {
    if (!theta) fail(ErrorKind::missing_parameter, std::string(gate_name(g.kind)) + " needs an angle");
    angle = g.adjoint ? -*theta : *theta;
  } else {
    if (theta) fail(ErrorKind::arity, std::string(gate_name(g.kind)) + " takes no parameter");
    if (is_rotation(g.kind) || g.kind == GateKind::CF) {
      if (g.fixed_params.size() != 1)
        fail(ErrorKind::missing_parameter, std::string(gate_name(g.kind)) + " needs a fixed angle");
      angle = g.fixed_params[0];
    }
  }
  const auto& t = g.targets;
  switch (g.kind) {
    case GateKind::H: kernel::apply_1q(st, t[0], mat2::hadamard()); break;
    case GateKind::X: kernel::apply_1q(st, t[0], mat2::pauli_x()); break;
    case GateKind::RX: kernel::apply_1q(st, t[0], mat2::rx(angle)); break;
    case GateKind::RY: kernel::apply_1q(st, t[0], mat2::ry(angle)); break;
    case GateKind::RZ: kernel::apply_1q(st, t[0], mat2::rz(angle)); break;
    case GateKind::CZ: kernel::apply_cz(st, t[0], t[1]); break;
    case GateKind::CNOT: kernel::apply_controlled_1q(st, t[0], t[1], mat2::pauli_x()); break;
    case GateKind::CRY:
    case GateKind::CF: kernel::apply_controlled_1q(st, t[0], t[1], mat2::ry(angle)); break;
    case GateKind::U3: {
      if (g.fixed_params.size() != 3) fail(ErrorKind::missing_parameter, "U3 needs three angles");
      kernel::apply_1q(st, t[0], mat2::u3(g.fixed_params[0], g.fixed_params[1], g.fixed_params[2]));
      break;
    }
    case GateKind::DenseUnitary:
      if (!g.matrix) fail(ErrorKind::missing_parameter, "dense gate without a matrix");
      kernel::apply_dense(st, t, *g.matrix);
      break;
  }
}

inline StateVector apply_gate(StateVector st, const GateDescriptor& g,
                              std::optional<double> theta = std::nullopt) {
  apply_gate_inplace(st, g, theta);
  return st;
}

// ---------------------------------------------------------------------------
// Measurement

inline std::size_t parse_outcome(std::string_view bits, int n_qubits) {
  if (static_cast<int>(bits.size()) != n_qubits)
    fail(ErrorKind::index, "outcome length " + std::to_string(bits.size()) + " != " +
                               std::to_string(n_qubits));
  std::size_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') fail(ErrorKind::index, "outcome must be a 0/1 string");
    idx = (idx << 1) | static_cast<std::size_t>(c == '1');
  }
  return idx;
}

inline std::string format_outcome(std::size_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q)
    if (index & (std::size_t{1} << q)) s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
  return s;
}

inline double exact_probability(const StateVector& st, std::string_view outcome) {
  return std::norm(st[parse_outcome(outcome, st.n_qubits())]);
}

inline std::vector<double> probabilities(const StateVector& st) {
  std::vector<double> p(st.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(st[i]);
  return p;
}

struct Counts {
  std::int64_t shots = 0;
  std::map<std::string, std::int64_t> table;

  std::int64_t operator[](const std::string& key) const {
    auto it = table.find(key);
    return it == table.end() ? 0 : it->second;
  }
};

/// Multinomial draw over outcome indices via sequential conditional binomials.
inline std::vector<std::int64_t> sample_multinomial(std::span<const double> probs,
                                                    std::int64_t shots, Rng& rng) {
  std::vector<std::int64_t> out(probs.size(), 0);
  std::int64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
    const double p = std::max(0.0, probs[i]);
    double q = mass > 0.0 ? p / mass : 0.0;
    q = std::clamp(q, 0.0, 1.0);
    std::int64_t k = 0;
    if (q >= 1.0) {
      k = remaining;
    } else if (q > 0.0) {
      std::binomial_distribution<std::int64_t> dist(remaining, q);
      k = dist(rng);
    }
    out[i] = k;
    remaining -= k;
    mass -= p;
  }
  if (!probs.empty()) out.back() += remaining;
  return out;
}

inline Counts sample_counts(const StateVector& st, std::int64_t shots, Rng& rng) {
  if (shots < 1) fail(ErrorKind::range, "shots must be >= 1");
  const auto p = probabilities(st);
  const auto k = sample_multinomial(p, shots, rng);
  Counts c;
  c.shots = shots;
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k[i] > 0) c.table.emplace(format_outcome(i, st.n_qubits()), k[i]);
  return c;
}

/// Number of successes in `shots` Bernoulli(p) trials.
inline std::int64_t sample_binomial(std::int64_t shots, double p, Rng& rng) {
  p = std::clamp(p, 0.0, 1.0);
  if (p <= 0.0) return 0;
  if (p >= 1.0) return shots;
  std::binomial_distribution<std::int64_t> dist(shots, p);
  return dist(rng);
}

inline double expectation_global_z(const StateVector& st) {
  double e = 0.0;
  for (std::size_t i = 0; i < st.dim(); ++i) {
    const double p = std::norm(st[i]);
    e += (std::popcount(i) & 1) ? -p : p;
  }
  return e;
}

// ---------------------------------------------------------------------------
// Haar-random unitaries

inline constexpr int kMaxHaarQubits = 6;

/// Ginibre matrix, QR-orthonormalized, columns rephased by the phases of R's
/// diagonal so the result is Haar distributed.
inline UnitaryMatrix haar_unitary(int n, Rng& rng) {
  if (n < 1 || n > kMaxHaarQubits)
    fail(ErrorKind::size, "haar_unitary supports 1.." + std::to_string(kMaxHaarQubits) + " qubits");
  const Eigen::Index d = Eigen::Index{1} << n;
  std::normal_distribution<double> normal(0.0, 1.0);
  UnitaryMatrix g(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = cplx{re, im};
    }
  Eigen::HouseholderQR<UnitaryMatrix> qr(g);
  UnitaryMatrix q = qr.householderQ();
  const UnitaryMatrix& r = qr.matrixQR();
  for (Eigen::Index c = 0; c < d; ++c) {
    const cplx diag = r(c, c);
    const double mag = std::abs(diag);
    q.col(c) *= mag > 0.0 ? diag / mag : cplx{1.0, 0.0};
  }
  return q;
}

inline bool is_unitary(const UnitaryMatrix& u, double tol = 1e-10) {
  const auto id = UnitaryMatrix::Identity(u.rows(), u.cols());
  return (u * u.adjoint() - id).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace ucvqa
