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

// Deterministic real-symmetric eigendecomposition, ground subspaces and
// level continuation across a c sweep.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>

#include "spinweb/hamiltonian.hpp"
#include "spinweb/hilbert.hpp"
#include "spinweb/parallel.hpp"

namespace spinweb {

inline constexpr double kDefaultDegeneracyTolerance = 1e-9;

struct Spectrum {
  RealVector eigenvalues;   // ascending
  RealMatrix eigenvectors;  // column k belongs to eigenvalues(k)
  /// Total-Sz sector of each eigenvector; empty when the solve was not sector-resolved.
  std::vector<int> magnetization;

  Index size() const { return static_cast<Index>(eigenvalues.size()); }
};

namespace detail {

inline void require_symmetric(const HermitianOperator& h) {
  if (h.matrix.rows() == 0 || h.matrix.rows() != h.matrix.cols()) {
    throw DomainError("eigendecompose: operator must be square and nonempty");
  }
  if (max_asymmetry(h.matrix) > 1e-10) throw DomainError("eigendecompose: operator is not symmetric");
}

inline bool conserves_sz(const HermitianOperator& h) {
  if (!h.system || h.system->dimension() != h.dimension()) return false;
  const int n = h.system->n_qubits();
  const double scale = std::max(1.0, h.matrix.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < h.matrix.cols(); ++j) {
    const int mj = magnetization_of(static_cast<Index>(j), n);
    for (Eigen::Index i = 0; i < h.matrix.rows(); ++i) {
      if (h.matrix(i, j) != 0.0 && magnetization_of(static_cast<Index>(i), n) != mj &&
          std::abs(h.matrix(i, j)) > 1e-12 * scale) {
        return false;
      }
    }
  }
  return true;
}

inline Spectrum sorted(Spectrum s) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(s.eigenvalues.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return s.eigenvalues(a) < s.eigenvalues(b); });
  Spectrum out;
  out.eigenvalues.resize(s.eigenvalues.size());
  out.eigenvectors.resize(s.eigenvectors.rows(), s.eigenvectors.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto dst = static_cast<Eigen::Index>(k);
    out.eigenvalues(dst) = s.eigenvalues(order[k]);
    out.eigenvectors.col(dst) = s.eigenvectors.col(order[k]);
    if (!s.magnetization.empty()) out.magnetization.push_back(s.magnetization[static_cast<std::size_t>(order[k])]);
  }
  return out;
}

}  // namespace detail

/// Full-matrix solve; the reference path for sector-wise results.
inline Spectrum eigendecompose_dense(const HermitianOperator& h) {
  detail::require_symmetric(h);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(h.matrix);
  return detail::sorted({es.eigenvalues(), es.eigenvectors(), {}});
}

/// Sector-by-sector solve, reassembled in ascending order (stable in sector order for ties).
/// Falls back to the dense path when the operator carries no system or mixes sectors.
inline Spectrum eigendecompose(const HermitianOperator& h) {
  detail::require_symmetric(h);
  if (!detail::conserves_sz(h)) return eigendecompose_dense(h);
  const auto sectors = total_sz_sectors(*h.system);
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  Spectrum s;
  s.eigenvalues.resize(dim);
  s.eigenvectors = RealMatrix::Zero(dim, dim);
  s.magnetization.reserve(static_cast<std::size_t>(dim));
  Eigen::Index col = 0;
  for (const auto& sector : sectors.sectors) {
    const auto& idx = sector.basis_indices;
    const auto k = static_cast<Eigen::Index>(idx.size());
    if (k == 0) continue;
    RealMatrix block(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        block(i, j) = h.matrix(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                               static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
      }
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(block);
    for (Eigen::Index j = 0; j < k; ++j, ++col) {
      s.eigenvalues(col) = es.eigenvalues()(j);
      for (Eigen::Index i = 0; i < k; ++i) {
        s.eigenvectors(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]), col) = es.eigenvectors()(i, j);
      }
      s.magnetization.push_back(sector.magnetization);
    }
  }
  return detail::sorted(std::move(s));
}

struct GroundSubspace {
  double energy = 0;
  int degeneracy = 0;
  RealMatrix basis;                // orthonormal columns
  std::vector<int> magnetization;  // per basis column, when known
  QuantumState density;            // normalized projector onto the span of basis

  DensityFactor factor() const {
    return {basis.cast<Complex>(), RealVector::Constant(basis.cols(), 1.0 / static_cast<double>(basis.cols()))};
  }
};

inline double spectral_range(const Spectrum& s) {
  return s.size() == 0 ? 0.0 : s.eigenvalues(s.eigenvalues.size() - 1) - s.eigenvalues(0);
}

inline QuantumState projector_state(const RealMatrix& basis) {
  const RealMatrix p = basis * basis.transpose() / static_cast<double>(basis.cols());
  return QuantumState::mixed_unchecked(p.cast<Complex>());
}

inline GroundSubspace ground_subspace(const Spectrum& spec, double tol_deg = kDefaultDegeneracyTolerance) {
  if (spec.size() == 0) throw DomainError("ground_subspace: empty spectrum");
  const double threshold = spec.eigenvalues(0) + tol_deg * std::max(1.0, spectral_range(spec));
  Eigen::Index d = 0;
  while (d < spec.eigenvalues.size() && spec.eigenvalues(d) <= threshold) ++d;
  RealMatrix basis = spec.eigenvectors.leftCols(d);
  std::vector<int> mags;
  if (!spec.magnetization.empty()) mags.assign(spec.magnetization.begin(), spec.magnetization.begin() + d);
  auto density = projector_state(basis);
  return {spec.eigenvalues(0), static_cast<int>(d), std::move(basis), std::move(mags), std::move(density)};
}

/// A degenerate multiplet: eigenvalues chained within the degeneracy threshold.
struct EnergyCluster {
  double energy = 0;
  Index first = 0;
  Index count = 0;
};

inline std::vector<EnergyCluster> energy_clusters(const Spectrum& spec, int max_clusters,
                                                  double tol_deg = kDefaultDegeneracyTolerance) {
  std::vector<EnergyCluster> out;
  const double threshold = tol_deg * std::max(1.0, spectral_range(spec));
  Index i = 0;
  while (i < spec.size() && static_cast<int>(out.size()) < max_clusters) {
    Index j = i + 1;
    while (j < spec.size() && spec.eigenvalues(static_cast<Eigen::Index>(j)) -
                                       spec.eigenvalues(static_cast<Eigen::Index>(j - 1)) <=
                                   threshold) {
      ++j;
    }
    out.push_back({spec.eigenvalues(static_cast<Eigen::Index>(i)), i, j - i});
    i = j;
  }
  return out;
}

/// ||P^T Q||_F^2 / min(dim P, dim Q): 1 when one subspace contains the other.
inline double subspace_overlap(const RealMatrix& p, const RealMatrix& q) {
  const double denom = static_cast<double>(std::min(p.cols(), q.cols()));
  if (denom == 0) return 0.0;
  return (p.transpose() * q).squaredNorm() / denom;
}

struct LevelPoint {
  double c = 0;
  double energy = 0;
  int degeneracy = 0;
  RealMatrix basis;
};

struct TrackedLevel {
  int label = 0;
  std::vector<LevelPoint> points;  // grid points where the level was inside the tracked window
};

struct LevelCrossing {
  double c_lo = 0;
  double c_hi = 0;
  int from_label = 0;
  int to_label = 0;
  /// |E_from - E_to| at the refined bracket ends; ~0 for an exact crossing.
  double min_gap = 0;

  double location() const { return 0.5 * (c_lo + c_hi); }
};

/// Grid interval where the new ground cluster had no candidate with overlap above 0.5.
struct FlaggedInterval {
  double c_lo = 0;
  double c_hi = 0;
  double best_overlap = 0;
};

struct LevelTrack {
  std::vector<double> c_grid;
  std::vector<TrackedLevel> levels;
  std::vector<int> ground_label;  // per grid point
  std::vector<LevelCrossing> crossings;
  std::vector<FlaggedInterval> flagged;

  const TrackedLevel& level(int label) const {
    for (const auto& l : levels) {
      if (l.label == label) return l;
    }
    throw DomainError("LevelTrack: unknown label " + std::to_string(label));
  }
};

struct TrackOptions {
  double tol_deg = kDefaultDegeneracyTolerance;
  double refine_width = 1e-6;
  RingOptions ring;
  int workers = worker_count();
};

namespace detail {

inline std::vector<LevelPoint> low_levels(const SpinSystem& system, double J, double c, int n_levels,
                                          const TrackOptions& opt) {
  const Spectrum spec = eigendecompose(build_combined(system, {J, c}, opt.ring));
  std::vector<LevelPoint> out;
  for (const auto& cl : energy_clusters(spec, n_levels, opt.tol_deg)) {
    out.push_back({c, cl.energy, static_cast<int>(cl.count),
                   spec.eigenvectors.middleCols(static_cast<Eigen::Index>(cl.first),
                                                static_cast<Eigen::Index>(cl.count))});
  }
  return out;
}

inline std::size_t best_match(const RealMatrix& ref, const std::vector<LevelPoint>& candidates) {
  std::size_t best = 0;
  double best_overlap = -1;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const double o = subspace_overlap(ref, candidates[k].basis);
    if (o > best_overlap) {
      best_overlap = o;
      best = k;
    }
  }
  return best;
}

/// Bisection on E_from - E_to with both levels continued from their bracket ends.
inline LevelCrossing refine_crossing(const SpinSystem& system, double J, double lo, double hi, RealMatrix from_basis,
                                     RealMatrix to_basis, int n_levels, const TrackOptions& opt) {
  const int window = std::max(n_levels, 2) + 2;
  double gap_lo = 0, gap_hi = 0;
  bool merged = false;
  auto gap_at = [&](double c, RealMatrix& from_ref, RealMatrix& to_ref) -> std::optional<double> {
    const auto levels = low_levels(system, J, c, window, opt);
    const auto a = best_match(from_ref, levels);
    const auto b = best_match(to_ref, levels);
    if (a == b) return std::nullopt;  // degenerate at c to within tol_deg
    from_ref = levels[a].basis;
    to_ref = levels[b].basis;
    return levels[a].energy - levels[b].energy;
  };
  while (hi - lo > opt.refine_width) {
    const double mid = 0.5 * (lo + hi);
    RealMatrix f = from_basis, t = to_basis;
    const auto diff = gap_at(mid, f, t);
    if (!diff) {
      lo = hi = mid;
      merged = true;
      break;
    }
    if (*diff < 0) {
      lo = mid;
      from_basis = std::move(f);
      to_basis = std::move(t);
    } else {
      hi = mid;
      from_basis = std::move(f);
      to_basis = std::move(t);
    }
  }
  if (!merged) {
    RealMatrix f = from_basis, t = to_basis;
    gap_lo = std::abs(gap_at(lo, f, t).value_or(0.0));
    f = from_basis;
    t = to_basis;
    gap_hi = std::abs(gap_at(hi, f, t).value_or(0.0));
  }
  return {lo, hi, 0, 0, std::min(gap_lo, gap_hi)};
}

}  // namespace detail

/// Continues the lowest n_levels multiplets across c_grid by maximal subspace overlap and
/// reports every grid interval where the ground multiplet changes identity, refined by bisection.
inline LevelTrack track_levels(const SpinSystem& system, double J, std::span<const double> c_grid, int n_levels,
                               const TrackOptions& opt = {}) {
  if (n_levels < 2) throw DomainError("track_levels: n_levels must be at least 2");
  if (c_grid.empty()) throw DomainError("track_levels: empty c grid");
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    if (!(c_grid[i] >= 0.0 && c_grid[i] <= 1.0)) throw DomainError("track_levels: c grid must lie in [0, 1]");
    if (i > 0 && !(c_grid[i] > c_grid[i - 1])) throw DomainError("track_levels: c grid must be strictly increasing");
  }
  const Index n = c_grid.size();
  std::vector<std::vector<LevelPoint>> points(n);
  parallel_for(
      n, [&](Index i) { points[i] = detail::low_levels(system, J, c_grid[i], n_levels, opt); }, opt.workers);

  LevelTrack track;
  track.c_grid.assign(c_grid.begin(), c_grid.end());
  std::vector<std::vector<int>> labels(n);
  int next_label = 0;
  auto open_level = [&](LevelPoint p) {
    track.levels.push_back({next_label, {std::move(p)}});
    return next_label++;
  };
  auto append = [&](int label, const LevelPoint& p) {
    for (auto& l : track.levels) {
      if (l.label == label) {
        l.points.push_back(p);
        return;
      }
    }
  };

  for (const auto& p : points[0]) labels[0].push_back(open_level(p));

  for (Index i = 1; i < n; ++i) {
    const auto& prev = points[i - 1];
    const auto& cur = points[i];
    struct Edge {
      double overlap;
      long long key;  // overlap quantized to 1e-9 so rounding noise cannot break ties
      std::size_t cur, prev;
    };
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < cur.size(); ++a) {
      for (std::size_t b = 0; b < prev.size(); ++b) {
        const double o = subspace_overlap(prev[b].basis, cur[a].basis);
        edges.push_back({o, std::llround(o * 1e9), a, b});
      }
    }
    // Highest overlap first; ties go to the lower current level, then the lower previous level.
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
      return std::tie(y.key, x.cur, x.prev) < std::tie(x.key, y.cur, y.prev);
    });
    std::vector<int> assigned(cur.size(), -1);
    std::vector<bool> prev_used(prev.size(), false);
    for (const auto& e : edges) {
      if (e.overlap <= 0.5 || assigned[e.cur] >= 0 || prev_used[e.prev]) continue;
      assigned[e.cur] = labels[i - 1][e.prev];
      prev_used[e.prev] = true;
    }
    for (std::size_t a = 0; a < cur.size(); ++a) {
      if (assigned[a] >= 0) {
        append(assigned[a], cur[a]);
      } else {
        assigned[a] = open_level(cur[a]);
      }
    }
    labels[i] = std::move(assigned);

    if (labels[i - 1][0] != labels[i][0]) {
      double best = 0;
      for (const auto& p : prev) best = std::max(best, subspace_overlap(p.basis, cur[0].basis));
      if (best <= 0.5) track.flagged.push_back({c_grid[i - 1], c_grid[i], best});
      auto crossing = detail::refine_crossing(system, J, c_grid[i - 1], c_grid[i], prev[0].basis, cur[0].basis,
                                              n_levels, opt);
      crossing.from_label = labels[i - 1][0];
      crossing.to_label = labels[i][0];
      track.crossings.push_back(crossing);
    }
  }
  for (Index i = 0; i < n; ++i) track.ground_label.push_back(labels[i][0]);
  return track;
}

/// c_steps + 1 uniform points on [c_min, c_max].
inline std::vector<double> uniform_grid(double c_min, double c_max, int c_steps) {
  if (c_steps < 1) throw DomainError("grid: need at least one step");
  if (!(c_min >= 0.0 && c_max <= 1.0 && c_min < c_max)) throw DomainError("grid: need 0 <= c_min < c_max <= 1");
  std::vector<double> g(static_cast<std::size_t>(c_steps) + 1);
  for (int k = 0; k <= c_steps; ++k) {
    g[static_cast<std::size_t>(k)] = (k == c_steps) ? c_max : c_min + (c_max - c_min) * k / c_steps;
  }
  return g;
}

}  // namespace spinweb
