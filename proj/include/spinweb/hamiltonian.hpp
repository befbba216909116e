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

// XX ring, XX star and their weighted combination J [c H_star + (1-c) H_ring].

#pragma once

#include <string>

#include "spinweb/hilbert.hpp"

namespace spinweb {

/// J > 0 is antiferromagnetic, J < 0 ferromagnetic.
struct CouplingConfig {
  double J = 1.0;
  double c = 0.0;

  void validate() const {
    if (!(c >= 0.0 && c <= 1.0)) throw DomainError("coupling: c = " + std::to_string(c) + " is outside [0, 1]");
  }
};

struct RingOptions {
  /// N = 2 ring: the periodic sum visits bond (1,2) twice. Rejected unless set.
  bool allow_double_bond = false;
};

namespace detail {

/// Adds scale * (sigma_x sigma_x + sigma_y sigma_y) on (a, b) in place: a 01 <-> 10 exchange with amplitude 2.
inline void add_xx_bond(RealMatrix& m, const SpinSystem& system, int a, int b, double scale) {
  const Index bit_a = Index{1} << system.bit_of(a);
  const Index bit_b = Index{1} << system.bit_of(b);
  for (Index s = 0; s < system.dimension(); ++s) {
    const bool sa = (s & bit_a) != 0;
    const bool sb = (s & bit_b) != 0;
    if (sa != sb) {
      m(static_cast<Eigen::Index>(s ^ bit_a ^ bit_b), static_cast<Eigen::Index>(s)) += 2.0 * scale;
    }
  }
}

inline RealMatrix zero_matrix(const SpinSystem& system) {
  const auto d = static_cast<Eigen::Index>(system.dimension());
  return RealMatrix::Zero(d, d);
}

}  // namespace detail

/// J * sum_i (sx^i sx^{i+1} + sy^i sy^{i+1}) over outer sites, periodic.
inline HermitianOperator build_ring(const SpinSystem& system, double J, RingOptions options = {}) {
  const int n = system.n_outer();
  if (n < 2 || (n < 3 && !options.allow_double_bond)) {
    throw DomainError("build_ring: need at least 3 outer spins (N = 2 requires allow_double_bond)");
  }
  RealMatrix m = detail::zero_matrix(system);
  if (J != 0.0) {
    for (int i = 1; i <= n; ++i) detail::add_xx_bond(m, system, i, system.ring_neighbor(i, 1), J);
  }
  return {std::move(m), system};
}

/// J * sum_i (sx^0 sx^i + sy^0 sy^i).
inline HermitianOperator build_star(const SpinSystem& system, double J) {
  if (!system.has_central()) throw DomainError("build_star: system has no central spin");
  RealMatrix m = detail::zero_matrix(system);
  if (J != 0.0) {
    for (int i = 1; i <= system.n_outer(); ++i) detail::add_xx_bond(m, system, 0, i, J);
  }
  return {std::move(m), system};
}

/// J [c H_star + (1 - c) H_ring].
inline HermitianOperator build_combined(const SpinSystem& system, const CouplingConfig& config,
                                        RingOptions options = {}) {
  config.validate();
  RealMatrix m = detail::zero_matrix(system);
  if (config.c != 0.0) m += build_star(system, config.J * config.c).matrix;
  if (config.c != 1.0) m += build_ring(system, config.J * (1.0 - config.c), options).matrix;
  return {std::move(m), system};
}

/// Permutation matrix of the outer-site relabeling k -> perm(k); the central spin stays fixed.
template <typename SiteMap>
RealMatrix outer_permutation(const SpinSystem& system, SiteMap perm) {
  const Index dim = system.dimension();
  RealMatrix p = RealMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Index b = 0; b < dim; ++b) {
    Index image = 0;
    for (int s : system.sites()) {
      if ((b >> system.bit_of(s)) & 1U) {
        const int t = (s == 0) ? 0 : perm(s);
        image |= Index{1} << system.bit_of(t);
      }
    }
    p(static_cast<Eigen::Index>(image), static_cast<Eigen::Index>(b)) = 1.0;
  }
  return p;
}

/// Outer-ring rotation k -> k+1.
inline RealMatrix cyclic_shift(const SpinSystem& system) {
  return outer_permutation(system, [&](int s) { return system.ring_neighbor(s, 1); });
}

}  // namespace spinweb
