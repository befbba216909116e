// Copyright 2026 The spinweb Authors
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

// Computational-basis primitives for spin-1/2 networks.
//
// Basis convention: a basis index encodes qubit 0 (the central spin, when
// present) as the most significant bit and outer spin k as the k-th next bit.
// Bit value 0 is spin-up |0>. Without a central spin the sites are 1..N and
// site 1 is the most significant bit.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spinweb/core.hpp"

namespace spinweb {

enum class Axis { x, y, z };

inline char axis_name(Axis a) {
  switch (a) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
  }
  return '?';
}

class SpinSystem {
 public:
  SpinSystem(int n_outer, bool has_central) : n_outer_(n_outer), has_central_(has_central) {
    if (n_outer < 1) throw DomainError("SpinSystem: n_outer must be positive");
    if (n_qubits() > 24) throw ResourceError("SpinSystem: more than 24 qubits cannot be stored densely");
  }

  /// N outer spins on a ring plus the central spin 0.
  static SpinSystem with_central(int n_outer) { return {n_outer, true}; }
  /// Plain register of n qubits labelled 1..n.
  static SpinSystem qubits(int n) { return {n, false}; }

  int n_outer() const { return n_outer_; }
  bool has_central() const { return has_central_; }
  int n_qubits() const { return n_outer_ + (has_central_ ? 1 : 0); }
  Index dimension() const { return Index{1} << n_qubits(); }

  bool valid_site(int site) const {
    if (site == 0) return has_central_;
    return site >= 1 && site <= n_outer_;
  }

  void require_site(int site) const {
    if (!valid_site(site)) {
      throw DomainError("invalid site label " + std::to_string(site) + " for system with " +
                        std::to_string(n_outer_) + " outer spins" + (has_central_ ? " and a central spin" : ""));
    }
  }

  /// Bit position (0 = least significant) of a site inside a basis index.
  int bit_of(int site) const {
    require_site(site);
    const int qubit = has_central_ ? site : site - 1;
    return n_qubits() - 1 - qubit;
  }

  std::vector<int> sites() const {
    std::vector<int> out;
    if (has_central_) out.push_back(0);
    for (int k = 1; k <= n_outer_; ++k) out.push_back(k);
    return out;
  }

  /// Outer site reached by moving `steps` positions around the ring from `site`.
  int ring_neighbor(int site, int steps) const {
    const int n = n_outer_;
    return ((site - 1 + steps) % n + n) % n + 1;
  }

  friend bool operator==(const SpinSystem&, const SpinSystem&) = default;

 private:
  int n_outer_;
  bool has_central_;
};

/// Dense real-symmetric operator in the computational basis.
struct HermitianOperator {
  RealMatrix matrix;
  /// Present when the operator acts on a spin network; enables Sz-sector solvers.
  std::optional<SpinSystem> system;

  Index dimension() const { return static_cast<Index>(matrix.rows()); }
};

inline double max_asymmetry(const RealMatrix& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

class QuantumState {
 public:
  enum class Kind { pure, mixed };

  static constexpr double kNormTolerance = 1e-12;
  static constexpr double kTraceTolerance = 1e-12;
  static constexpr double kHermitianTolerance = 1e-12;
  static constexpr double kPsdTolerance = -1e-10;

  static QuantumState pure(ComplexVector amplitudes) {
    if (amplitudes.size() == 0) throw DomainError("pure state: empty amplitude vector");
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > kNormTolerance) {
      throw DomainError("pure state: norm " + std::to_string(norm) + " is not 1");
    }
    return QuantumState(Kind::pure, std::move(amplitudes), {});
  }

  static QuantumState pure(const RealVector& amplitudes) { return pure(ComplexVector(amplitudes.cast<Complex>())); }

  /// Normalizes before wrapping; throws on the zero vector.
  static QuantumState normalized(ComplexVector amplitudes) {
    const double norm = amplitudes.norm();
    if (norm < 1e-300) throw DomainError("pure state: cannot normalize the zero vector");
    amplitudes /= norm;
    return QuantumState(Kind::pure, std::move(amplitudes), {});
  }

  static QuantumState basis(Index dimension, Index index) {
    if (index >= dimension) throw DomainError("basis state index out of range");
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dimension));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return QuantumState(Kind::pure, std::move(v), {});
  }

  static QuantumState mixed(ComplexMatrix density) {
    validate_density(density);
    return QuantumState(Kind::mixed, {}, std::move(density));
  }

  /// For densities that are valid by construction (normalized projectors, ...).
  static QuantumState mixed_unchecked(ComplexMatrix density) {
    return QuantumState(Kind::mixed, {}, std::move(density));
  }

  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::pure; }

  Index dimension() const {
    return static_cast<Index>(is_pure() ? amplitudes_.size() : density_.rows());
  }

  const ComplexVector& amplitudes() const {
    if (!is_pure()) throw DomainError("amplitudes requested from a mixed state");
    return amplitudes_;
  }

  /// Density matrix; pure states are promoted to |psi><psi|.
  ComplexMatrix density() const {
    if (is_pure()) return amplitudes_ * amplitudes_.adjoint();
    return density_;
  }

  const ComplexMatrix& density_ref() const {
    if (is_pure()) throw DomainError("density_ref requested from a pure state");
    return density_;
  }

  static void validate_density(const ComplexMatrix& rho) {
    if (rho.rows() == 0 || rho.rows() != rho.cols()) throw DomainError("density matrix must be square and nonempty");
    const Complex tr = rho.trace();
    if (std::abs(tr.real() - 1.0) > kTraceTolerance || std::abs(tr.imag()) > kTraceTolerance) {
      throw DomainError("density matrix trace is not 1");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
      throw DomainError("density matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kPsdTolerance) {
      throw DomainError("density matrix has a negative eigenvalue");
    }
  }

 private:
  QuantumState(Kind kind, ComplexVector amplitudes, ComplexMatrix density)
      : kind_(kind), amplitudes_(std::move(amplitudes)), density_(std::move(density)) {}

  Kind kind_;
  ComplexVector amplitudes_;
  ComplexMatrix density_;
};

/// v, w, x, y on the diagonal and the |01><10| coherence z.
struct SzBlocks {
  double v = 0, w = 0, x = 0, y = 0;
  Complex z = 0;
};

class TwoQubitRDM {
 public:
  static constexpr double kOffBlockTolerance = 1e-10;

  explicit TwoQubitRDM(const QuantumState& state) {
    if (state.dimension() != 4) throw DomainError("TwoQubitRDM: state must have dimension 4");
    if (state.is_pure()) {
      matrix_ = state.density();
    } else {
      matrix_ = state.density_ref();
    }
    double off_block = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        const bool middle = (i == 1 || i == 2) && (j == 1 || j == 2);
        if (!middle) off_block = std::max(off_block, std::abs(matrix_(i, j)));
      }
    }
    if (off_block < kOffBlockTolerance) {
      SzBlocks b;
      b.v = matrix_(0, 0).real();
      b.w = matrix_(1, 1).real();
      b.x = matrix_(2, 2).real();
      b.y = matrix_(3, 3).real();
      b.z = matrix_(1, 2);
      blocks_ = b;
    }
  }

  static TwoQubitRDM from_blocks(const SzBlocks& b) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = b.v;
    m(1, 1) = b.w;
    m(2, 2) = b.x;
    m(3, 3) = b.y;
    m(1, 2) = b.z;
    m(2, 1) = std::conj(b.z);
    return TwoQubitRDM(QuantumState::mixed(ComplexMatrix(m)));
  }

  const Eigen::Matrix4cd& matrix() const { return matrix_; }
  const std::optional<SzBlocks>& sz_blocks() const { return blocks_; }

 private:
  Eigen::Matrix4cd matrix_;
  std::optional<SzBlocks> blocks_;
};

struct SzSector {
  /// Eigenvalue of the total sigma_z: (#zeros - #ones).
  int magnetization = 0;
  std::vector<Index> basis_indices;
};

struct SzSectorDecomposition {
  std::vector<SzSector> sectors;  // ascending magnetization
};

inline int magnetization_of(Index basis_index, int n_qubits) {
  return n_qubits - 2 * std::popcount(static_cast<unsigned long long>(basis_index));
}

inline SzSectorDecomposition total_sz_sectors(const SpinSystem& system) {
  const int n = system.n_qubits();
  SzSectorDecomposition out;
  out.sectors.resize(static_cast<std::size_t>(n + 1));
  for (int ones = 0; ones <= n; ++ones) out.sectors[static_cast<std::size_t>(n - ones)].magnetization = n - 2 * ones;
  for (Index b = 0; b < system.dimension(); ++b) {
    const int ones = std::popcount(static_cast<unsigned long long>(b));
    out.sectors[static_cast<std::size_t>(n - ones)].basis_indices.push_back(b);
  }
  return out;
}

/// sigma_axis(site_a) * sigma_axis(site_b), identity elsewhere. Always real in this basis.
inline HermitianOperator pauli_pair(const SpinSystem& system, int site_a, int site_b, Axis axis) {
  system.require_site(site_a);
  system.require_site(site_b);
  if (site_a == site_b) throw DomainError("pauli_pair: sites must differ");
  const Index dim = system.dimension();
  const Index bit_a = Index{1} << system.bit_of(site_a);
  const Index bit_b = Index{1} << system.bit_of(site_b);
  RealMatrix m = RealMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Index b = 0; b < dim; ++b) {
    const bool sa = (b & bit_a) != 0;
    const bool sb = (b & bit_b) != 0;
    const double parity = (sa == sb) ? 1.0 : -1.0;
    const auto col = static_cast<Eigen::Index>(b);
    switch (axis) {
      case Axis::x:
        m(static_cast<Eigen::Index>(b ^ bit_a ^ bit_b), col) = 1.0;
        break;
      case Axis::y:
        // (i(-1)^sa)(i(-1)^sb) = -(-1)^(sa+sb)
        m(static_cast<Eigen::Index>(b ^ bit_a ^ bit_b), col) = -parity;
        break;
      case Axis::z:
        m(col, col) = parity;
        break;
    }
  }
  return {std::move(m), system};
}

/// Sum over all sites of sigma_z.
inline HermitianOperator total_sz(const SpinSystem& system) {
  const Index dim = system.dimension();
  RealMatrix m = RealMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Index b = 0; b < dim; ++b) {
    m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = magnetization_of(b, system.n_qubits());
  }
  return {std::move(m), system};
}

namespace detail {

inline void require_distinct_sites(const SpinSystem& system, std::span<const int> sites) {
  if (sites.empty()) throw DomainError("site list must be nonempty");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    system.require_site(sites[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (sites[i] == sites[j]) throw DomainError("duplicate site label " + std::to_string(sites[i]));
    }
  }
}

/// Full basis index for every (kept index, traced index) pair, kept-major.
inline std::vector<Index> split_index_table(const SpinSystem& system, std::span<const int> keep) {
  const int k = static_cast<int>(keep.size());
  const int n = system.n_qubits();
  std::vector<int> keep_bits;
  keep_bits.reserve(keep.size());
  for (int s : keep) keep_bits.push_back(system.bit_of(s));
  std::vector<int> rest_bits;
  for (int bit = 0; bit < n; ++bit) {
    if (std::find(keep_bits.begin(), keep_bits.end(), bit) == keep_bits.end()) rest_bits.push_back(bit);
  }
  const Index kd = Index{1} << k;
  const Index rd = Index{1} << (n - k);
  std::vector<Index> table(kd * rd);
  for (Index i = 0; i < kd; ++i) {
    Index base = 0;
    for (int j = 0; j < k; ++j) {
      // keep[0] is the most significant factor of the output
      if ((i >> (k - 1 - j)) & 1U) base |= Index{1} << keep_bits[static_cast<std::size_t>(j)];
    }
    for (Index r = 0; r < rd; ++r) {
      Index full = base;
      for (std::size_t t = 0; t < rest_bits.size(); ++t) {
        if ((r >> t) & 1U) full |= Index{1} << rest_bits[t];
      }
      table[i * rd + r] = full;
    }
  }
  return table;
}

}  // namespace detail

/// Reduced density matrix on `keep`; output tensor factors follow the order of `keep`.
inline QuantumState partial_trace(const QuantumState& state, const SpinSystem& system, std::span<const int> keep) {
  detail::require_distinct_sites(system, keep);
  if (state.dimension() != system.dimension()) throw DomainError("partial_trace: state dimension does not match system");
  const int k = static_cast<int>(keep.size());
  const Index kd = Index{1} << k;
  const Index rd = system.dimension() / kd;
  const auto table = detail::split_index_table(system, keep);
  const auto ekd = static_cast<Eigen::Index>(kd);
  ComplexMatrix out = ComplexMatrix::Zero(ekd, ekd);
  if (state.is_pure()) {
    const ComplexVector& psi = state.amplitudes();
    for (Index r = 0; r < rd; ++r) {
      for (Index i = 0; i < kd; ++i) {
        const Complex ai = psi(static_cast<Eigen::Index>(table[i * rd + r]));
        if (ai == Complex{}) continue;
        for (Index j = 0; j < kd; ++j) {
          out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
              ai * std::conj(psi(static_cast<Eigen::Index>(table[j * rd + r])));
        }
      }
    }
  } else {
    const ComplexMatrix& rho = state.density_ref();
    for (Index i = 0; i < kd; ++i) {
      for (Index j = 0; j < kd; ++j) {
        Complex acc = 0;
        for (Index r = 0; r < rd; ++r) {
          acc += rho(static_cast<Eigen::Index>(table[i * rd + r]), static_cast<Eigen::Index>(table[j * rd + r]));
        }
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
      }
    }
  }
  // Hermitize away summation-order noise before validating.
  ComplexMatrix herm = (out + out.adjoint()) * 0.5;
  return QuantumState::mixed(std::move(herm));
}

inline QuantumState partial_trace(const QuantumState& state, const SpinSystem& system, std::initializer_list<int> keep) {
  return partial_trace(state, system, std::span<const int>(keep.begin(), keep.size()));
}

inline QuantumState mix(std::span<const QuantumState> states, std::span<const double> weights) {
  if (states.empty() || states.size() != weights.size()) throw DomainError("mix: need one weight per state");
  double total = 0;
  for (double w : weights) {
    if (w < 0) throw DomainError("mix: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("mix: weights must sum to 1");
  const auto dim = static_cast<Eigen::Index>(states.front().dimension());
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (static_cast<Eigen::Index>(states[i].dimension()) != dim) throw DomainError("mix: dimension mismatch");
    if (states[i].is_pure()) {
      const ComplexVector& a = states[i].amplitudes();
      rho.noalias() += weights[i] * (a * a.adjoint());
    } else {
      rho += weights[i] * states[i].density_ref();
    }
  }
  return QuantumState::mixed(std::move(rho));
}

/// Spectral factorization rho = V diag(w) V^dagger restricted to the support.
struct DensityFactor {
  ComplexMatrix vectors;
  RealVector weights;
};

inline DensityFactor factorize(const QuantumState& state) {
  if (state.is_pure()) {
    return {ComplexMatrix(state.amplitudes()), RealVector::Ones(1)};
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(state.density_ref());
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 1e-14) support.push_back(i);
  }
  DensityFactor f{ComplexMatrix(es.eigenvectors().rows(), static_cast<Eigen::Index>(support.size())),
                  RealVector(static_cast<Eigen::Index>(support.size()))};
  for (std::size_t k = 0; k < support.size(); ++k) {
    f.vectors.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(support[k]);
    f.weights(static_cast<Eigen::Index>(k)) = es.eigenvalues()(support[k]);
  }
  return f;
}

/// Uhlmann fidelity from support factorizations: squared trace norm of sqrt(rho1) sqrt(rho2).
inline double fidelity(const DensityFactor& a, const DensityFactor& b) {
  if (a.vectors.rows() != b.vectors.rows()) throw DomainError("fidelity: dimension mismatch");
  if (a.weights.size() == 0 || b.weights.size() == 0) return 0.0;
  const ComplexMatrix m = a.weights.cwiseSqrt().asDiagonal() * (a.vectors.adjoint() * b.vectors) *
                          b.weights.cwiseSqrt().asDiagonal();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const double root = svd.singularValues().sum();
  return std::clamp(root * root, 0.0, 1.0);
}

/// F = [tr sqrt(sqrt(rho1) rho2 sqrt(rho1))]^2; pure inputs use the overlap shortcuts.
inline double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.dimension() != b.dimension()) throw DomainError("fidelity: dimension mismatch");
  if (a.is_pure() && b.is_pure()) return std::clamp(std::norm(a.amplitudes().dot(b.amplitudes())), 0.0, 1.0);
  if (a.is_pure()) {
    const ComplexVector& v = a.amplitudes();
    return std::clamp((v.adjoint() * b.density_ref() * v)(0, 0).real(), 0.0, 1.0);
  }
  if (b.is_pure()) return fidelity(b, a);
  return fidelity(factorize(a), factorize(b));
}

/// tr(rho O) for a real operator.
inline double expectation(const QuantumState& state, const HermitianOperator& op) {
  if (state.dimension() != op.dimension()) throw DomainError("expectation: dimension mismatch");
  if (state.is_pure()) {
    const ComplexVector& v = state.amplitudes();
    return (v.adjoint() * (op.matrix.cast<Complex>() * v))(0, 0).real();
  }
  return (state.density_ref().cwiseProduct(op.matrix.transpose().cast<Complex>())).sum().real();
}

/// Base-2 von Neumann entropy.
inline double von_neumann_entropy(const QuantumState& state) {
  if (state.is_pure()) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(state.density_ref(), Eigen::EigenvaluesOnly);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-15) s -= p * std::log2(p);
  }
  return s;
}

}  // namespace spinweb
