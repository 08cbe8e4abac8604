// Copyright 2026 The stochsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stochsense/common.hpp"

namespace stochsense {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Eigenvalues q(a) of the sensing generators on each computational basis
/// state, so that the sensing unitary acts as
///
///     U(theta) |a> = exp(-i q(a) . theta) |a>.
///
/// Shifting every q(a) by the same vector only adds a global phase, so the
/// integer labelling (q = bits, generator |1><1|) and the half-angle labelling
/// of exp(-i theta Z / 2) describe the same physics with theta -> -theta.
class EigenvalueMap {
 public:
  enum class Kind {
    kLocalZ,
    kScaledLocalZ,
    kHalvedZ,
    kEntanglingZZ,
    kMulticopy,
    kCustom
  };

  /// q_j(a) = a_j.
  static EigenvalueMap local_z(int n_qubits) {
    check_qubits(n_qubits);
    EigenvalueMap m(Kind::kLocalZ, n_qubits, n_qubits);
    for (std::size_t a = 0; a < m.dim(); ++a)
      for (int j = 0; j < n_qubits; ++j) m.q_(a, j) = qubit_bit(a, j, n_qubits);
    return m;
  }

  /// q_j(a) = alpha_j a_j.
  static EigenvalueMap scaled_local_z(const std::vector<double>& alpha) {
    int n = static_cast<int>(alpha.size());
    check_qubits(n);
    EigenvalueMap m(Kind::kScaledLocalZ, n, n);
    for (std::size_t a = 0; a < m.dim(); ++a)
      for (int j = 0; j < n; ++j) m.q_(a, j) = alpha[j] * qubit_bit(a, j, n);
    return m;
  }

  /// q_j(a) = 1/2 - a_j, i.e. exp(-i theta_j Z_j / 2) on every qubit.
  static EigenvalueMap halved_z(int n_qubits) {
    check_qubits(n_qubits);
    EigenvalueMap m(Kind::kHalvedZ, n_qubits, n_qubits);
    for (std::size_t a = 0; a < m.dim(); ++a)
      for (int j = 0; j < n_qubits; ++j)
        m.q_(a, j) = 0.5 - qubit_bit(a, j, n_qubits);
    return m;
  }

  /// Parameter j < n-1 couples to a_j a_{j+1}; the last couples to a_{n-1}.
  /// For two qubits this is q(a) = (a_1 a_2, a_2).
  static EigenvalueMap entangling_zz(int n_qubits) {
    check_qubits(n_qubits);
    if (n_qubits < 2) throw std::invalid_argument("entangling_zz needs >= 2 qubits");
    EigenvalueMap m(Kind::kEntanglingZZ, n_qubits, n_qubits);
    for (std::size_t a = 0; a < m.dim(); ++a) {
      for (int j = 0; j + 1 < n_qubits; ++j)
        m.q_(a, j) = qubit_bit(a, j, n_qubits) * qubit_bit(a, j + 1, n_qubits);
      m.q_(a, n_qubits - 1) = qubit_bit(a, n_qubits - 1, n_qubits);
    }
    return m;
  }

  /// `copies` blocks of `n_params` qubits each; q_i(a) counts the excitations
  /// of qubit i across all copies.
  static EigenvalueMap multicopy(int n_params, int copies) {
    int n = n_params * copies;
    check_qubits(n);
    if (n_params < 1 || copies < 1)
      throw std::invalid_argument("multicopy needs positive sizes");
    EigenvalueMap m(Kind::kMulticopy, n, n_params);
    for (std::size_t a = 0; a < m.dim(); ++a)
      for (int c = 0; c < copies; ++c)
        for (int i = 0; i < n_params; ++i)
          m.q_(a, i) += qubit_bit(a, c * n_params + i, n);
    return m;
  }

  /// Rows are basis states, columns are parameters.
  static EigenvalueMap custom(int n_qubits, Eigen::MatrixXd table) {
    check_qubits(n_qubits);
    if (table.rows() != (Eigen::Index(1) << n_qubits) || table.cols() < 1)
      throw std::invalid_argument("custom eigenvalue table has wrong shape");
    EigenvalueMap m(Kind::kCustom, n_qubits, static_cast<int>(table.cols()));
    m.q_ = std::move(table);
    return m;
  }

  Kind kind() const { return kind_; }
  int n_qubits() const { return n_qubits_; }
  int n_params() const { return n_params_; }
  std::size_t dim() const { return std::size_t(1) << n_qubits_; }
  double q(std::size_t a, int j) const { return q_(static_cast<Eigen::Index>(a), j); }
  Eigen::VectorXd row(std::size_t a) const {
    return q_.row(static_cast<Eigen::Index>(a)).transpose();
  }
  const Eigen::MatrixXd& table() const { return q_; }

  /// True when q_j(a) depends only on a_j, so pairs of basis states can be
  /// grouped by Hamming distance.
  bool is_local() const {
    return kind_ == Kind::kLocalZ || kind_ == Kind::kScaledLocalZ ||
           kind_ == Kind::kHalvedZ;
  }

  double phase(std::size_t a, std::span<const double> theta) const {
    double s = 0.0;
    for (int j = 0; j < n_params_; ++j) s += q(a, j) * theta[j];
    return s;
  }

 private:
  EigenvalueMap(Kind kind, int n_qubits, int n_params)
      : kind_(kind),
        n_qubits_(n_qubits),
        n_params_(n_params),
        q_(Eigen::MatrixXd::Zero(Eigen::Index(1) << n_qubits, n_params)) {}

  static void check_qubits(int n) {
    if (n < 1) throw std::invalid_argument("eigenvalue map needs >= 1 qubit");
    if (n > kMaxDenseQubits)
      throw ResourceCapError("eigenvalue map exceeds " +
                             std::to_string(kMaxDenseQubits) + " qubits");
  }

  Kind kind_;
  int n_qubits_;
  int n_params_;
  Eigen::MatrixXd q_;
};

class StateVector {
 public:
  explicit StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxDenseQubits)
      throw ResourceCapError("state vector size out of range");
    amps_ = CVector::Zero(Eigen::Index(1) << n_qubits);
    amps_(0) = 1.0;
  }

  static StateVector basis(int n_qubits, std::size_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim()) throw std::invalid_argument("basis index out of range");
    s.amps_(0) = 0.0;
    s.amps_(static_cast<Eigen::Index>(index)) = 1.0;
    return s;
  }

  /// Normalizes `amplitudes`; rejects non power-of-two lengths and zero or
  /// non-finite vectors.
  static StateVector from_amplitudes(const CVector& amplitudes) {
    Eigen::Index d = amplitudes.size();
    int n = 0;
    while ((Eigen::Index(1) << n) < d) ++n;
    if (d < 2 || (Eigen::Index(1) << n) != d)
      throw std::invalid_argument("amplitude count is not a power of two");
    if (!amplitudes.allFinite())
      throw std::invalid_argument("amplitudes are not finite");
    double norm = amplitudes.norm();
    if (!(norm > 1e-300)) throw std::invalid_argument("amplitudes cannot be normalized");
    StateVector s(n);
    s.amps_ = amplitudes / norm;
    return s;
  }

  /// (|0...0> + |1...1>) / sqrt(2).
  static StateVector ghz(int n_qubits) {
    StateVector s(n_qubits);
    s.amps_(0) = 1.0 / std::sqrt(2.0);
    s.amps_(s.amps_.size() - 1) = 1.0 / std::sqrt(2.0);
    return s;
  }

  /// (|01> + |10>) / sqrt(2).
  static StateVector bell() {
    StateVector s(2);
    s.amps_.setZero();
    s.amps_(1) = 1.0 / std::sqrt(2.0);
    s.amps_(2) = 1.0 / std::sqrt(2.0);
    return s;
  }

  /// Product of cos(t_j/2)|0> + e^{i p_j} sin(t_j/2)|1>.
  static StateVector product(const std::vector<double>& bloch_theta,
                             const std::vector<double>& bloch_phi) {
    if (bloch_theta.size() != bloch_phi.size())
      throw std::invalid_argument("product probe: angle lists differ in length");
    StateVector s(static_cast<int>(bloch_theta.size()));
    const int n = s.n_qubits_;
    for (std::size_t a = 0; a < s.dim(); ++a) {
      Complex v = 1.0;
      for (int j = 0; j < n; ++j) {
        const double h = 0.5 * bloch_theta[j];
        v *= qubit_bit(a, j, n) ? std::polar(1.0, bloch_phi[j]) * std::sin(h)
                                : Complex(std::cos(h), 0.0);
      }
      s.amps_(static_cast<Eigen::Index>(a)) = v;
    }
    return s;
  }

  /// |+>^n.
  static StateVector plus(int n_qubits) {
    StateVector s(n_qubits);
    s.amps_.setConstant(std::pow(2.0, -0.5 * n_qubits));
    return s;
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  CVector& amplitudes() { return amps_; }
  Complex operator[](std::size_t a) const { return amps_(static_cast<Eigen::Index>(a)); }

  double norm() const { return amps_.norm(); }

  /// Outcome probabilities of the listed qubits. The first listed qubit is the
  /// most significant bit of the outcome index.
  std::vector<double> probabilities(const std::vector<int>& measured) const {
    int m = static_cast<int>(measured.size());
    for (int q : measured)
      if (q < 0 || q >= n_qubits_) throw std::invalid_argument("measured qubit out of range");
    std::vector<double> out(std::size_t(1) << m, 0.0);
    for (std::size_t a = 0; a < dim(); ++a) {
      std::size_t k = 0;
      for (int i = 0; i < m; ++i)
        k = (k << 1) | static_cast<std::size_t>(qubit_bit(a, measured[i], n_qubits_));
      out[k] += std::norm(amps_(static_cast<Eigen::Index>(a)));
    }
    return out;
  }

  std::vector<double> probabilities() const {
    std::vector<int> all(static_cast<std::size_t>(n_qubits_));
    for (int j = 0; j < n_qubits_; ++j) all[j] = j;
    return probabilities(all);
  }

 private:
  int n_qubits_;
  CVector amps_;
};

inline void apply_phase_unitary(StateVector& state, std::span<const double> theta,
                                const EigenvalueMap& map) {
  if (map.n_qubits() != state.n_qubits())
    throw std::invalid_argument("eigenvalue map and state sizes differ");
  if (static_cast<int>(theta.size()) != map.n_params())
    throw std::invalid_argument("theta has wrong length");
  auto& amps = state.amplitudes();
  for (std::size_t a = 0; a < state.dim(); ++a)
    amps(static_cast<Eigen::Index>(a)) *= std::polar(1.0, -map.phase(a, theta));
}

struct Gate {
  enum class Kind { kH, kX, kCnot, kRz, kSwapAmplitude };
  Kind kind;
  int q0 = 0;
  int q1 = 0;
  double angle = 0.0;
};

/// A gate list over `n_qubits`. Rz(t) = exp(-i t Z / 2). kSwapAmplitude on
/// (q0, q1) exchanges |00> and |10> of that pair and leaves the rest alone.
class Circuit {
 public:
  explicit Circuit(int n_qubits) : n_qubits_(n_qubits) {}

  Circuit& h(int q) { return push({Gate::Kind::kH, q, q, 0.0}); }
  Circuit& x(int q) { return push({Gate::Kind::kX, q, q, 0.0}); }
  Circuit& cnot(int c, int t) { return push({Gate::Kind::kCnot, c, t, 0.0}); }
  Circuit& rz(int q, double t) { return push({Gate::Kind::kRz, q, q, t}); }
  Circuit& swap_amplitude(int a, int b) {
    return push({Gate::Kind::kSwapAmplitude, a, b, 0.0});
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }

  Circuit adjoint() const {
    Circuit out(n_qubits_);
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
      Gate g = *it;
      if (g.kind == Gate::Kind::kRz) g.angle = -g.angle;
      out.gates_.push_back(g);
    }
    return out;
  }

  void apply(StateVector& state) const {
    if (state.n_qubits() != n_qubits_)
      throw std::invalid_argument("circuit and state sizes differ");
    for (const Gate& g : gates_) apply_gate(g, state);
  }

 private:
  Circuit& push(Gate g) {
    if (g.q0 < 0 || g.q0 >= n_qubits_ || g.q1 < 0 || g.q1 >= n_qubits_)
      throw std::invalid_argument("gate qubit out of range");
    if ((g.kind == Gate::Kind::kCnot || g.kind == Gate::Kind::kSwapAmplitude) &&
        g.q0 == g.q1)
      throw std::invalid_argument("two-qubit gate on a single qubit");
    gates_.push_back(g);
    return *this;
  }

  void apply_gate(const Gate& g, StateVector& state) const {
    auto& v = state.amplitudes();
    const std::size_t d = state.dim();
    const std::size_t m0 = std::size_t(1) << (n_qubits_ - 1 - g.q0);
    const std::size_t m1 = std::size_t(1) << (n_qubits_ - 1 - g.q1);
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t a = 0; a < d; ++a) {
      auto ia = static_cast<Eigen::Index>(a);
      switch (g.kind) {
        case Gate::Kind::kH:
          if (!(a & m0)) {
            auto ib = static_cast<Eigen::Index>(a | m0);
            Complex u = v(ia), w = v(ib);
            v(ia) = r * (u + w);
            v(ib) = r * (u - w);
          }
          break;
        case Gate::Kind::kX:
          if (!(a & m0)) std::swap(v(ia), v(static_cast<Eigen::Index>(a | m0)));
          break;
        case Gate::Kind::kCnot:
          if ((a & m0) && !(a & m1))
            std::swap(v(ia), v(static_cast<Eigen::Index>(a | m1)));
          break;
        case Gate::Kind::kRz:
          v(ia) *= std::polar(1.0, (a & m0) ? 0.5 * g.angle : -0.5 * g.angle);
          break;
        case Gate::Kind::kSwapAmplitude:
          if ((a & m0) && !(a & m1))
            std::swap(v(ia), v(static_cast<Eigen::Index>(a & ~m0)));
          break;
      }
    }
  }

  int n_qubits_;
  std::vector<Gate> gates_;
};

/// H on qubit 0 followed by CNOTs fanning out from qubit 0.
inline Circuit ghz_encoder(int n_qubits) {
  Circuit c(n_qubits);
  c.h(0);
  for (int j = 1; j < n_qubits; ++j) c.cnot(0, j);
  return c;
}

/// Maps |00> to (|01> + |10>) / sqrt(2).
inline Circuit bell_encoder() {
  Circuit c(2);
  c.h(0).cnot(0, 1).x(1);
  return c;
}

inline Circuit product_encoder(int n_qubits) {
  Circuit c(n_qubits);
  for (int j = 0; j < n_qubits; ++j) c.h(j);
  return c;
}

/// Readout stage: Rz offsets, then the inverse encoder, then X on `flips`.
struct Decoder {
  Circuit encoder;
  std::vector<double> z_offsets;
  std::vector<int> flips;

  void apply(StateVector& state) const {
    Circuit c(encoder.n_qubits());
    for (std::size_t j = 0; j < z_offsets.size(); ++j)
      if (z_offsets[j] != 0.0) c.rz(static_cast<int>(j), z_offsets[j]);
    c.apply(state);
    encoder.adjoint().apply(state);
    Circuit f(encoder.n_qubits());
    for (int q : flips) f.x(q);
    f.apply(state);
  }
};

/// Probabilities of `measured` after applying `decoder` to `state`.
inline std::vector<double> decode_probs(StateVector state, const Decoder& decoder,
                                        const std::vector<int>& measured) {
  decoder.apply(state);
  return state.probabilities(measured);
}

/// Dense density matrix with validity checks.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() < 1)
      throw std::invalid_argument("density matrix must be square");
  }

  static DensityMatrix pure(const StateVector& s) {
    return DensityMatrix(s.amplitudes() * s.amplitudes().adjoint());
  }

  const CMatrix& matrix() const { return rho_; }
  Complex operator()(std::size_t a, std::size_t b) const {
    return rho_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  }

  /// Hermitian, unit trace and positive semidefinite within `tol`.
  bool is_valid(double tol = 1e-10) const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > tol) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho_ + rho_.adjoint()),
                                              Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > -tol;
  }

  double max_off_diagonal() const {
    double m = 0.0;
    for (Eigen::Index a = 0; a < rho_.rows(); ++a)
      for (Eigen::Index b = 0; b < rho_.cols(); ++b)
        if (a != b) m = std::max(m, std::abs(rho_(a, b)));
    return m;
  }

 private:
  CMatrix rho_;
};

/// Weighted average of U(theta) |probe><probe| U(theta)^dagger over the given
/// parameter points. Weights are normalized internally.
inline DensityMatrix averaged_density(const StateVector& probe, const EigenvalueMap& map,
                                      const std::vector<std::vector<double>>& thetas,
                                      const std::vector<double>& weights = {}) {
  if (thetas.empty()) throw std::invalid_argument("averaged_density needs samples");
  if (!weights.empty() && weights.size() != thetas.size())
    throw std::invalid_argument("weights and samples differ in length");
  const auto d = static_cast<Eigen::Index>(probe.dim());
  CMatrix rho = CMatrix::Zero(d, d);
  double total = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    double w = weights.empty() ? 1.0 : weights[i];
    StateVector s = probe;
    apply_phase_unitary(s, thetas[i], map);
    rho += w * s.amplitudes() * s.amplitudes().adjoint();
    total += w;
  }
  return DensityMatrix(rho / total);
}

/// Assignment of n_var Pauli strings over {X, Y} on ceil(log2 n_var) qubits.
/// The first half have an even number of Y factors, the second half odd.
/// Strings are written with qubit 0 first, e.g. "XY".
///
/// Each string carries a sign (-1)^floor(y/2), y being its Y count. On the
/// span of |0..0> and |1..1> the generator sum_j s_j theta_j P_j then has
/// off-diagonal element (sum_even theta) - i (sum_odd theta), so
/// <1..1| exp(-i G) |1..1> = cos(sqrt(C)). Same-parity strings whose Y counts
/// differ by 2 mod 4 anticommute to -2 Z..Z, so unsigned strings do not give
/// this identity.
struct PauliStringAssignment {
  int n_vars = 0;
  int n_qubits = 0;
  std::vector<std::string> strings;
  std::vector<int> signs;

  static PauliStringAssignment make(int n_vars) {
    if (n_vars < 2 || n_vars % 2 != 0)
      throw std::invalid_argument("number of variables must be even and >= 2");
    int n = 0;
    while ((1 << n) < n_vars) ++n;
    n = std::max(n, 1);
    if (n > kMaxDenseQubits) throw ResourceCapError("too many variables");
    std::vector<std::string> even, odd;
    for (std::size_t m = 0; m < (std::size_t(1) << n); ++m) {
      std::string s(static_cast<std::size_t>(n), 'X');
      for (int j = 0; j < n; ++j)
        if (qubit_bit(m, j, n)) s[static_cast<std::size_t>(j)] = 'Y';
      (popcount(m) % 2 == 0 ? even : odd).push_back(s);
    }
    PauliStringAssignment out{n_vars, n, {}, {}};
    for (int j = 0; j < n_vars / 2; ++j) out.strings.push_back(even[static_cast<std::size_t>(j)]);
    for (int j = 0; j < n_vars / 2; ++j) out.strings.push_back(odd[static_cast<std::size_t>(j)]);
    for (const auto& str : out.strings) {
      const auto y = std::count(str.begin(), str.end(), 'Y');
      out.signs.push_back((y / 2) % 2 == 0 ? 1 : -1);
    }
    return out;
  }
};

inline CMatrix pauli_string_matrix(const std::string& s) {
  const Complex i(0.0, 1.0);
  CMatrix out = CMatrix::Identity(1, 1);
  for (char c : s) {
    CMatrix p(2, 2);
    switch (c) {
      case 'I': p << 1, 0, 0, 1; break;
      case 'X': p << 0, 1, 1, 0; break;
      case 'Y': p << 0, -i, i, 0; break;
      case 'Z': p << 1, 0, 0, -1; break;
      default: throw std::invalid_argument("unknown Pauli letter");
    }
    CMatrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index col = 0; col < out.cols(); ++col)
        next.block(2 * r, 2 * col, 2, 2) = out(r, col) * p;
    out = std::move(next);
  }
  return out;
}

/// <1...1| exp(-i sum_j s_j theta_j P_j) |1...1> for the assignment's signed
/// strings.
inline Complex quadratic_constraint_overlap(const PauliStringAssignment& assignment,
                                            std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != assignment.n_vars)
    throw std::invalid_argument("theta has wrong length");
  if (assignment.signs.size() != assignment.strings.size())
    throw std::invalid_argument("assignment signs and strings differ in length");
  const Eigen::Index d = Eigen::Index(1) << assignment.n_qubits;
  CMatrix g = CMatrix::Zero(d, d);
  for (int j = 0; j < assignment.n_vars; ++j)
    g += (assignment.signs[static_cast<std::size_t>(j)] * theta[j]) *
         pauli_string_matrix(assignment.strings[static_cast<std::size_t>(j)]);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  const Eigen::Index top = d - 1;
  Complex amp = 0.0;
  for (Eigen::Index k = 0; k < d; ++k)
    amp += std::polar(1.0, -es.eigenvalues()(k)) * std::norm(es.eigenvectors()(top, k));
  return amp;
}

/// (|1000> + |0101>) / sqrt(2): one excitation per variable spread over two
/// copies of a two-variable register.
inline StateVector multicopy_spatial_probe() {
  CVector v = CVector::Zero(16);
  v(0b1000) = 1.0;
  v(0b0101) = 1.0;
  return StateVector::from_amplitudes(v);
}

/// Readout vector (|1000> - i|0101>) / sqrt(2). Its overlap probability with
/// the sensed probe is (1 + sin(2 theta_2 - theta_1)) / 2.
inline StateVector multicopy_spatial_readout() {
  CVector v = CVector::Zero(16);
  v(0b1000) = 1.0;
  v(0b0101) = Complex(0.0, -1.0);
  return StateVector::from_amplitudes(v);
}

inline StateVector multicopy_sequential_probe() {
  CVector v = CVector::Zero(4);
  v(0b10) = 1.0;
  v(0b01) = 1.0;
  return StateVector::from_amplitudes(v);
}

inline StateVector multicopy_sequential_readout() {
  CVector v = CVector::Zero(4);
  v(0b00) = 1.0;
  v(0b01) = Complex(0.0, -1.0);
  return StateVector::from_amplitudes(v);
}

/// |00><10| + |10><00| plus identity on |01>, |11>.
inline Circuit multicopy_swap() {
  Circuit c(2);
  c.swap_amplitude(0, 1);
  return c;
}

inline double overlap_probability(const StateVector& a, const StateVector& b) {
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace stochsense
