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

// c sweeps of the ring/star combination: per-point ground-state observables,
// fidelities with reference ground states, and singlet-covering ansatz states.

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spinweb/entanglement.hpp"
#include "spinweb/hamiltonian.hpp"
#include "spinweb/parallel.hpp"
#include "spinweb/spectral.hpp"

namespace spinweb {

struct SitePair {
  std::string name;
  int a = 1;
  int b = 2;
};

/// Nearest (1,2) and next-to-nearest (1,3) outer pairs by ring adjacency. For N = 2 both are (1,2).
inline std::vector<SitePair> default_pairs(const SpinSystem& system) {
  const int nnn = system.n_outer() >= 3 ? system.ring_neighbor(1, 2) : 2;
  return {{"nn", 1, system.ring_neighbor(1, 1)}, {"nnn", 1, nnn}};
}

struct ReferenceSet {
  bool star = true;
  /// When set, O_r uses the ground state at c = ring_eps instead of c = 0 (lifts the ring degeneracy).
  std::optional<double> ring_eps;
  bool ansatz = false;
};

struct SweepConfig {
  int n_outer = 4;
  double J = 1.0;
  std::vector<double> c_grid = uniform_grid(0.0, 1.0, 400);
  std::vector<SitePair> pairs;  // empty -> default_pairs
  ReferenceSet refs;
  int n_levels = 1;
  RingOptions ring;
  double tol_deg = kDefaultDegeneracyTolerance;
  int workers = worker_count();

  SpinSystem system() const { return SpinSystem::with_central(n_outer); }

  std::vector<SitePair> resolved_pairs() const { return pairs.empty() ? default_pairs(system()) : pairs; }

  void validate() const {
    const auto sys = system();
    if (c_grid.empty()) throw DomainError("sweep: empty c grid");
    for (std::size_t i = 0; i < c_grid.size(); ++i) {
      if (!(c_grid[i] >= 0.0 && c_grid[i] <= 1.0)) throw DomainError("sweep: c grid must lie in [0, 1]");
      if (i > 0 && !(c_grid[i] > c_grid[i - 1])) throw DomainError("sweep: c grid must be strictly increasing");
    }
    for (const auto& p : resolved_pairs()) {
      sys.require_site(p.a);
      sys.require_site(p.b);
      if (p.a == p.b) throw DomainError("sweep: pair " + p.name + " repeats a site");
    }
    if (n_levels < 1) throw DomainError("sweep: n_levels must be positive");
    if (refs.ring_eps && !(*refs.ring_eps >= 0.0 && *refs.ring_eps <= 1.0)) {
      throw DomainError("sweep: ring_eps must lie in [0, 1]");
    }
  }
};

struct PairObservables {
  double concurrence = 0;
  double concurrence_wootters = 0;
  double xx = 0;
  double zz = 0;
  TwoQubitRDM rdm;
};

struct SweepRecord {
  double c = 0;
  double ground_energy = 0;
  int ground_degeneracy = 0;
  std::vector<double> low_energies;  // lowest n_levels distinct levels
  std::vector<PairObservables> pairs;
  double O_r = 0;
  double O_s = 0;
  std::optional<double> O_p;
  std::vector<double> ansatz_angles;

  // Default pair layout: index 0 is nn, index 1 is nnn.
  double C_nn() const { return pairs.at(0).concurrence; }
  double C_nnn() const { return pairs.at(1).concurrence; }
  double XX_nn() const { return pairs.at(0).xx; }
  double XX_nnn() const { return pairs.at(1).xx; }
  double ZZ_nn() const { return pairs.at(0).zz; }
  double ZZ_nnn() const { return pairs.at(1).zz; }
};

// ---------------------------------------------------------------------------
// singlet ansatz

using Pairing = std::vector<std::pair<int, int>>;

struct SingletAnsatz {
  int n_outer = 0;
  std::vector<Pairing> covering_terms;
  std::vector<Complex> phases;
};

/// Even N: the two nearest-neighbour dimer coverings of the ring (central spin unpaired).
/// Odd N: for each k, the central spin paired with outer spin k and dimers on the remaining chain.
inline std::vector<Pairing> singlet_coverings(int n_outer) {
  if (n_outer < 3) throw DomainError("singlet ansatz: need N >= 3");
  const auto sys = SpinSystem::with_central(n_outer);
  std::vector<Pairing> out;
  if (n_outer % 2 == 0) {
    for (int start : {1, 2}) {
      Pairing p;
      for (int s = start; s < start + n_outer; s += 2) p.emplace_back(sys.ring_neighbor(s, 0), sys.ring_neighbor(s, 1));
      out.push_back(std::move(p));
    }
  } else {
    for (int k = 1; k <= n_outer; ++k) {
      Pairing p{{0, k}};
      for (int m = 1; 2 * m <= n_outer - 1; ++m) {
        p.emplace_back(sys.ring_neighbor(k, 2 * m - 1), sys.ring_neighbor(k, 2 * m));
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

/// Product of (|01> - |10>)/sqrt2 over the pairing; unpaired sites are |0>.
inline ComplexVector covering_vector(const SpinSystem& system, const Pairing& pairing) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(system.dimension()));
  const auto n_pairs = pairing.size();
  const double amp = std::pow(std::numbers::sqrt2, -static_cast<double>(n_pairs));
  for (Index choice = 0; choice < (Index{1} << n_pairs); ++choice) {
    Index basis = 0;
    double sign = 1.0;
    for (std::size_t p = 0; p < n_pairs; ++p) {
      const auto [a, b] = pairing[p];
      // choice bit 0: |0_a 1_b>, bit 1: -|1_a 0_b>
      if ((choice >> p) & 1U) {
        basis |= Index{1} << system.bit_of(a);
        sign = -sign;
      } else {
        basis |= Index{1} << system.bit_of(b);
      }
    }
    v(static_cast<Eigen::Index>(basis)) += sign * amp;
  }
  return v;
}

inline QuantumState build_singlet_ansatz(int n_outer, std::span<const Complex> phases) {
  const auto terms = singlet_coverings(n_outer);
  if (phases.size() != terms.size()) {
    throw DomainError("singlet ansatz: expected " + std::to_string(terms.size()) + " phases, got " +
                      std::to_string(phases.size()));
  }
  const auto sys = SpinSystem::with_central(n_outer);
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(sys.dimension()));
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (std::abs(std::abs(phases[k]) - 1.0) > 1e-12) throw DomainError("singlet ansatz: phases must have unit modulus");
    psi += phases[k] * covering_vector(sys, terms[k]);
  }
  if (psi.norm() < 1e-12) throw DomainError("singlet ansatz: superposition vanishes for these phases");
  return QuantumState::normalized(std::move(psi));
}

inline SingletAnsatz make_singlet_ansatz(int n_outer, std::vector<Complex> phases) {
  SingletAnsatz a{n_outer, singlet_coverings(n_outer), std::move(phases)};
  if (a.phases.size() != a.covering_terms.size()) throw DomainError("singlet ansatz: phase count mismatch");
  return a;
}

/// Fidelity used for ansatz overlaps. For even N the central spin is unpaired, so both states
/// are reduced to the outer spins first; for odd N the full fidelity is used.
inline double ansatz_fidelity(int n_outer, const QuantumState& ansatz, const QuantumState& target) {
  const auto sys = SpinSystem::with_central(n_outer);
  if (ansatz.dimension() != sys.dimension() || target.dimension() != sys.dimension()) {
    throw DomainError("ansatz_fidelity: dimension mismatch");
  }
  if (n_outer % 2 == 1) return fidelity(ansatz, target);
  std::vector<int> outer;
  for (int k = 1; k <= n_outer; ++k) outer.push_back(k);
  return fidelity(partial_trace(ansatz, sys, outer), partial_trace(target, sys, outer));
}

struct AnsatzFit {
  std::vector<Complex> phases;
  std::vector<double> angles;  // radians, first fixed at 0
  double fidelity = 0;
};

struct AnsatzSearchOptions {
  int grid_points = 24;
  /// Upper bound on exhaustive evaluations; the per-phase grid is coarsened to fit.
  double evaluation_budget = 4e6;
  double refine_tolerance = 1e-10;
};

namespace detail {

/// F(u) = Re(u^H G u) / Re(u^H S u) for u_k = exp(i phi_k).
struct AnsatzQuadratic {
  ComplexMatrix gram;    // S_kl = <t_k|t_l>
  ComplexMatrix target;  // G_kl = <t_k| rho |t_l>

  double evaluate(std::span<const double> angles) const {
    const auto k = static_cast<Eigen::Index>(angles.size());
    ComplexVector u(k);
    for (Eigen::Index i = 0; i < k; ++i) u(i) = std::polar(1.0, angles[static_cast<std::size_t>(i)]);
    const double norm = (u.adjoint() * gram * u)(0, 0).real();
    if (norm < 1e-14) return 0.0;
    return (u.adjoint() * target * u)(0, 0).real() / norm;
  }
};

inline AnsatzQuadratic ansatz_quadratic(int n_outer, const QuantumState& target) {
  const auto sys = SpinSystem::with_central(n_outer);
  if (target.dimension() != sys.dimension()) throw DomainError("optimize_ansatz_phases: target dimension mismatch");
  const auto terms = singlet_coverings(n_outer);
  const auto big = static_cast<Eigen::Index>(sys.dimension());
  ComplexMatrix t(big, static_cast<Eigen::Index>(terms.size()));
  for (std::size_t k = 0; k < terms.size(); ++k) t.col(static_cast<Eigen::Index>(k)) = covering_vector(sys, terms[k]);
  if (n_outer % 2 == 1) {
    const ComplexMatrix w = target.is_pure() ? ComplexMatrix(target.amplitudes().adjoint() * t) : ComplexMatrix();
    return {t.adjoint() * t, target.is_pure() ? ComplexMatrix(w.adjoint() * w) : ComplexMatrix(t.adjoint() * target.density_ref() * t)};
  }
  // central spin is the most significant bit and fixed to |0>: outer amplitudes are the top half
  const Eigen::Index half = big / 2;
  const ComplexMatrix outer_terms = t.topRows(half);
  std::vector<int> outer;
  for (int k = 1; k <= n_outer; ++k) outer.push_back(k);
  const QuantumState reduced = partial_trace(target, sys, outer);
  return {outer_terms.adjoint() * outer_terms, outer_terms.adjoint() * reduced.density_ref() * outer_terms};
}

}  // namespace detail

/// Exhaustive search over a uniform phase grid (the first phase fixes the global phase),
/// followed by compass-search refinement. Deterministic for a given grid.
inline AnsatzFit optimize_ansatz_phases(int n_outer, const QuantumState& target, const AnsatzSearchOptions& opt = {}) {
  const auto problem = detail::ansatz_quadratic(n_outer, target);
  const auto k = static_cast<std::size_t>(problem.gram.rows());
  const std::size_t free = k - 1;
  int grid = std::max(1, opt.grid_points);
  if (std::pow(static_cast<double>(grid), static_cast<double>(free)) > opt.evaluation_budget) {
    grid = std::max(2, static_cast<int>(std::floor(std::pow(opt.evaluation_budget, 1.0 / static_cast<double>(free)))));
  }
  const double step0 = 2.0 * std::numbers::pi / grid;

  std::vector<double> angles(k, 0.0), best(k, 0.0);
  double best_f = -1.0;
  std::vector<int> counter(free, 0);
  for (;;) {
    for (std::size_t i = 0; i < free; ++i) angles[i + 1] = step0 * counter[i];
    const double f = problem.evaluate(angles);
    if (f > best_f + 1e-15) {
      best_f = f;
      best = angles;
    }
    std::size_t pos = 0;
    while (pos < free && ++counter[pos] == grid) counter[pos++] = 0;
    if (pos == free) break;
  }

  double step = step0 / 2;
  while (step > opt.refine_tolerance) {
    bool improved = false;
    for (std::size_t i = 1; i < k; ++i) {
      for (double dir : {1.0, -1.0}) {
        auto trial = best;
        trial[i] += dir * step;
        const double f = problem.evaluate(trial);
        if (f > best_f + 1e-15) {
          best_f = f;
          best = std::move(trial);
          improved = true;
        }
      }
    }
    if (!improved) step /= 2;
  }

  AnsatzFit fit;
  for (double& a : best) a = std::remainder(a, 2.0 * std::numbers::pi);
  fit.angles = best;
  for (double a : best) fit.phases.push_back(std::polar(1.0, a));
  fit.fidelity = std::clamp(best_f, 0.0, 1.0);
  return fit;
}

// ---------------------------------------------------------------------------
// references and sweeps

struct PreparedReferences {
  int n_outer = 0;
  DensityFactor ring;
  std::optional<DensityFactor> star;
  bool ansatz = false;
};

struct ReferenceOverlaps {
  double O_r = 0;
  double O_s = 0;
  std::optional<double> O_p;
  std::vector<double> ansatz_angles;
};

inline GroundSubspace ground_at(const SpinSystem& system, double J, double c, const RingOptions& ring = {},
                                double tol_deg = kDefaultDegeneracyTolerance) {
  return ground_subspace(eigendecompose(build_combined(system, {J, c}, ring)), tol_deg);
}

/// Ring reference is the c = 0 ground mixture, or c = ring_eps when requested.
inline PreparedReferences prepare_references(const SweepConfig& config) {
  const auto sys = config.system();
  PreparedReferences refs;
  refs.n_outer = config.n_outer;
  auto reference = [&](double c) {
    try {
      return ground_at(sys, config.J, c, config.ring, config.tol_deg).factor();
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " (at c = " + std::to_string(c) + ")");
    }
  };
  refs.ring = reference(config.refs.ring_eps.value_or(0.0));
  if (config.refs.star) refs.star = reference(1.0);
  refs.ansatz = config.refs.ansatz;
  return refs;
}

inline ReferenceOverlaps reference_overlaps(const DensityFactor& state, const QuantumState& state_density,
                                            const PreparedReferences& refs) {
  ReferenceOverlaps out;
  out.O_r = fidelity(state, refs.ring);
  if (refs.star) out.O_s = fidelity(state, *refs.star);
  if (refs.ansatz) {
    const auto fit = optimize_ansatz_phases(refs.n_outer, state_density);
    out.O_p = fit.fidelity;
    out.ansatz_angles = fit.angles;
  }
  return out;
}

inline ReferenceOverlaps reference_overlaps(const QuantumState& state, const PreparedReferences& refs) {
  return reference_overlaps(factorize(state), state, refs);
}

inline SweepRecord sweep_point(const SweepConfig& config, const PreparedReferences& refs, double c) {
  const auto sys = config.system();
  const auto spec = eigendecompose(build_combined(sys, {config.J, c}, config.ring));
  const auto ground = ground_subspace(spec, config.tol_deg);
  SweepRecord r;
  r.c = c;
  r.ground_energy = ground.energy;
  r.ground_degeneracy = ground.degeneracy;
  for (const auto& cl : energy_clusters(spec, config.n_levels, config.tol_deg)) r.low_energies.push_back(cl.energy);
  const ComplexMatrix zz = pauli_pair(SpinSystem::qubits(2), 1, 2, Axis::z).matrix.cast<Complex>();
  const ComplexMatrix xx = pauli_pair(SpinSystem::qubits(2), 1, 2, Axis::x).matrix.cast<Complex>();
  for (const auto& p : config.resolved_pairs()) {
    TwoQubitRDM rdm(partial_trace(ground.density, sys, {p.a, p.b}));
    const ComplexMatrix m = rdm.matrix();
    const double cw = concurrence_wootters(rdm).value;
    const double cv = rdm.sz_blocks() ? concurrence_symmetric(rdm).value : cw;
    r.pairs.push_back({cv, cw, std::clamp((m * xx).trace().real(), -1.0, 1.0),
                       std::clamp((m * zz).trace().real(), -1.0, 1.0), std::move(rdm)});
  }
  auto ov = reference_overlaps(ground.factor(), ground.density, refs);
  r.O_r = ov.O_r;
  r.O_s = ov.O_s;
  r.O_p = ov.O_p;
  r.ansatz_angles = std::move(ov.ansatz_angles);
  return r;
}

/// One record per grid point, in grid order. Domain errors carry the offending c.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  config.validate();
  const auto refs = prepare_references(config);
  std::vector<std::optional<SweepRecord>> slots(config.c_grid.size());
  parallel_for(
      config.c_grid.size(),
      [&](Index i) {
        const double c = config.c_grid[i];
        try {
          slots[i] = sweep_point(config, refs, c);
        } catch (const DomainError& e) {
          throw DomainError(std::string(e.what()) + " (at c = " + std::to_string(c) + ")");
        }
      },
      config.workers);
  std::vector<SweepRecord> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Ground-level crossings over the sweep grid.
inline LevelTrack sweep_crossings(const SweepConfig& config) {
  config.validate();
  TrackOptions opt;
  opt.tol_deg = config.tol_deg;
  opt.ring = config.ring;
  opt.workers = config.workers;
  return track_levels(config.system(), config.J, config.c_grid, std::max(2, config.n_levels), opt);
}

}  // namespace spinweb
