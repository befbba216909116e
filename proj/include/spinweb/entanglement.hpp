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

// Two-qubit entanglement: Wootters concurrence, the Sz-block shortcut,
// entanglement of formation, and two-point correlations.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "spinweb/hilbert.hpp"

namespace spinweb {

struct ConcurrenceResult {
  enum class Method { wootters, symmetric_blocks };
  double value = 0;
  Method method = Method::wootters;
};

namespace detail {

inline ComplexMatrix hermitian_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  const double cut = 1e-13 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const RealVector root = es.eigenvalues().unaryExpr([cut](double x) { return x < cut ? 0.0 : std::sqrt(x); });
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// C = max{0, l1 - l2 - l3 - l4}, l_i the descending square roots of the eigenvalues of
/// rho (sy x sy) rho* (sy x sy). The l_i are taken directly as the singular values of
/// sqrt(rho) (sy x sy) sqrt(rho)*.
inline ConcurrenceResult concurrence_wootters(const TwoQubitRDM& rdm) {
  const ComplexMatrix rho = rdm.matrix();
  QuantumState::validate_density(rho);
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const ComplexMatrix root = detail::hermitian_sqrt(rho);
  const ComplexMatrix m = root * yy * root.conjugate();
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const RealVector lambda = svd.singularValues();
  const double c = lambda(0) - lambda(1) - lambda(2) - lambda(3);
  return {std::clamp(c, 0.0, 1.0), ConcurrenceResult::Method::wootters};
}

/// C = 2 max{|z| - sqrt(v y), 0} for a matrix in Sz-block form.
inline ConcurrenceResult concurrence_symmetric(const TwoQubitRDM& rdm) {
  const auto& blocks = rdm.sz_blocks();
  if (!blocks) throw DomainError("concurrence_symmetric: matrix is not Sz-block diagonal; use Wootters");
  const double vy = std::max(blocks->v * blocks->y, 0.0);
  const double c = 2.0 * std::max(std::abs(blocks->z) - std::sqrt(vy), 0.0);
  return {std::clamp(c, 0.0, 1.0), ConcurrenceResult::Method::symmetric_blocks};
}

/// Symmetric shortcut when the blocks are present, Wootters otherwise.
inline ConcurrenceResult concurrence(const TwoQubitRDM& rdm) {
  return rdm.sz_blocks() ? concurrence_symmetric(rdm) : concurrence_wootters(rdm);
}

/// Outer-pair concurrence of the star ground mixture: 1/N (N odd), 1/N - 1/(N^2 - N) (N even).
inline double star_concurrence_closed_form(int n_outer) {
  if (n_outer < 2) throw DomainError("star_concurrence_closed_form: need N >= 2");
  const double n = n_outer;
  if (n_outer % 2 == 1) return 1.0 / n;
  return 1.0 / n - 1.0 / (n * n - n);
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// E_F = h((1 + sqrt(1 - C^2)) / 2).
inline double entanglement_of_formation(double concurrence_value) {
  if (!(concurrence_value >= 0.0 && concurrence_value <= 1.0)) {
    throw DomainError("entanglement_of_formation: C = " + std::to_string(concurrence_value) + " outside [0, 1]");
  }
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - concurrence_value * concurrence_value)));
}

inline TwoQubitRDM pair_rdm(const QuantumState& state, const SpinSystem& system, int site_i, int site_j) {
  return TwoQubitRDM(partial_trace(state, system, {site_i, site_j}));
}

/// <sa^i sa^j>, evaluated on the two-site reduced state.
inline double correlation(const QuantumState& state, const SpinSystem& system, Axis axis, int site_i, int site_j) {
  if (site_i == site_j) throw DomainError("correlation: sites must differ");
  const auto rdm = pair_rdm(state, system, site_i, site_j);
  const auto op = pauli_pair(SpinSystem::qubits(2), 1, 2, axis);
  const double value = (rdm.matrix().cwiseProduct(op.matrix.transpose().cast<Complex>())).sum().real();
  return std::clamp(value, -1.0, 1.0);
}

}  // namespace spinweb
