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

// Four outer spins: named states, the star/ring action table, the two interpolated
// ground levels with closed-form concurrences, coefficient extraction, and the
// field-plus-central-measurement protocols.

#pragma once

#include <array>
#include <bit>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spinweb/entanglement.hpp"
#include "spinweb/hamiltonian.hpp"
#include "spinweb/spectral.hpp"

namespace spinweb::n4 {

inline constexpr int kOuter = 4;
inline constexpr Index kOuterDim = 16;
inline constexpr Index kFullDim = 32;

enum class Label { A, B, C1, C3, C1p, C3p, D, j2m0, ZERO4, ONE4 };

inline constexpr std::array kAllLabels{Label::A,   Label::B, Label::C1,   Label::C3,    Label::C1p,
                                       Label::C3p, Label::D, Label::j2m0, Label::ZERO4, Label::ONE4};

inline std::string_view label_name(Label l) {
  switch (l) {
    case Label::A: return "A";
    case Label::B: return "B";
    case Label::C1: return "C1";
    case Label::C3: return "C3";
    case Label::C1p: return "C1p";
    case Label::C3p: return "C3p";
    case Label::D: return "D";
    case Label::j2m0: return "j2m0";
    case Label::ZERO4: return "ZERO4";
    case Label::ONE4: return "ONE4";
  }
  return "?";
}

inline Label parse_label(std::string_view name) {
  for (Label l : kAllLabels) {
    if (label_name(l) == name) return l;
  }
  throw DomainError("unknown named state '" + std::string(name) + "'");
}

struct NamedState {
  Label label;
  RealVector vector;  // 16 outer amplitudes, site 1 leftmost
};

namespace detail {

/// Sum of coefficient * |bits>, bits written left to right for sites 1..4.
inline RealVector ket(std::initializer_list<std::pair<double, std::string_view>> terms) {
  RealVector v = RealVector::Zero(kOuterDim);
  for (const auto& [coeff, bits] : terms) {
    Index idx = 0;
    for (char ch : bits) idx = (idx << 1) | (ch == '1' ? 1 : 0);
    v(static_cast<Eigen::Index>(idx)) += coeff;
  }
  return v;
}

}  // namespace detail

inline NamedState named_state(Label l) {
  using detail::ket;
  const double r2 = 1.0 / std::numbers::sqrt2;
  switch (l) {
    case Label::A: return {l, ket({{r2, "0101"}, {r2, "1010"}})};
    case Label::B: return {l, ket({{0.5, "0011"}, {0.5, "0110"}, {0.5, "1100"}, {0.5, "1001"}})};
    case Label::C1: return {l, ket({{0.5, "0001"}, {0.5, "0010"}, {0.5, "0100"}, {0.5, "1000"}})};
    case Label::C3: return {l, ket({{0.5, "0111"}, {0.5, "1011"}, {0.5, "1101"}, {0.5, "1110"}})};
    case Label::C1p: return {l, ket({{0.5, "0001"}, {-0.5, "0010"}, {0.5, "0100"}, {-0.5, "1000"}})};
    case Label::C3p: return {l, ket({{0.5, "0111"}, {-0.5, "1011"}, {0.5, "1101"}, {-0.5, "1110"}})};
    case Label::D: return {l, ket({{r2, "0101"}, {-r2, "1010"}})};
    case Label::j2m0: {
      const RealVector v =
          (std::numbers::sqrt2 * named_state(Label::A).vector + 2.0 * named_state(Label::B).vector) / std::sqrt(6.0);
      return {l, v};
    }
    case Label::ZERO4: return {l, ket({{1.0, "0000"}})};
    case Label::ONE4: return {l, ket({{1.0, "1111"}})};
  }
  throw DomainError("unknown named state");
}

inline RealVector outer(Label l) { return named_state(l).vector; }

/// |central_bit> (x) |outer>; the central spin is the most significant bit.
inline RealVector with_central(int central_bit, const RealVector& outer_vec) {
  if (central_bit != 0 && central_bit != 1) throw DomainError("central bit must be 0 or 1");
  if (outer_vec.size() != kOuterDim) throw DomainError("outer state must have 16 amplitudes");
  RealVector v = RealVector::Zero(kFullDim);
  v.segment(central_bit * kOuterDim, kOuterDim) = outer_vec;
  return v;
}

inline SpinSystem system() { return SpinSystem::with_central(kOuter); }

/// Hamiltonian source for the checks. A nonzero perturbation adds delta * sz^1 sz^2 to
/// both parts, which is used as a negative control.
struct Model {
  double J = 1.0;
  double perturbation = 0.0;

  RealMatrix star() const { return build_star(system(), J).matrix + extra(); }
  RealMatrix ring() const { return build_ring(system(), J).matrix + extra(); }
  HermitianOperator combined(double c) const {
    CouplingConfig{J, c}.validate();
    return {c * star() + (1.0 - c) * ring(), system()};
  }
  GroundSubspace ground(double c, double tol = kDefaultDegeneracyTolerance) const {
    return ground_subspace(eigendecompose(combined(c)), tol);
  }

 private:
  RealMatrix extra() const {
    if (perturbation == 0.0) return RealMatrix::Zero(kFullDim, kFullDim);
    return perturbation * pauli_pair(system(), 1, 2, Axis::z).matrix;
  }
};

// ---------------------------------------------------------------------------
// action table

enum class Part { star, ring };

inline std::string_view part_name(Part p) { return p == Part::star ? "star" : "ring"; }

struct TableEntry {
  int central_bit;
  Label input;
  double coefficient;  // 0 means the action vanishes
  int out_bit;
  Label output;
};

struct TableRow {
  int central_bit;
  Label input;
  TableEntry star;
  TableEntry ring;
};

inline const std::vector<TableRow>& action_table() {
  const double s2 = std::numbers::sqrt2;
  const double s6 = std::sqrt(6.0);
  using L = Label;
  static const std::vector<TableRow> rows = {
      {0, L::A, {0, L::A, 2 * s2, 1, L::C1}, {0, L::A, 4 * s2, 0, L::B}},
      {1, L::A, {1, L::A, 2 * s2, 0, L::C3}, {1, L::A, 4 * s2, 1, L::B}},
      {0, L::B, {0, L::B, 4, 1, L::C1}, {0, L::B, 4 * s2, 0, L::A}},
      {1, L::B, {1, L::B, 4, 0, L::C3}, {1, L::B, 4 * s2, 1, L::A}},
      {0, L::C1, {0, L::C1, 4, 1, L::ZERO4}, {0, L::C1, 4, 0, L::C1}},
      {1, L::C1, {1, L::C1, 2 * s6, 0, L::j2m0}, {1, L::C1, 4, 1, L::C1}},
      {0, L::C3, {0, L::C3, 2 * s6, 1, L::j2m0}, {0, L::C3, 4, 0, L::C3}},
      {1, L::C3, {1, L::C3, 4, 0, L::ONE4}, {1, L::C3, 4, 1, L::C3}},
      {0, L::C1p, {0, L::C1p, 0, 0, L::C1p}, {0, L::C1p, -4, 0, L::C1p}},
      {1, L::C1p, {1, L::C1p, 2 * s2, 0, L::D}, {1, L::C1p, -4, 1, L::C1p}},
      {0, L::C3p, {0, L::C3p, 2 * s2, 1, L::D}, {0, L::C3p, -4, 0, L::C3p}},
      {1, L::C3p, {1, L::C3p, 0, 1, L::C3p}, {1, L::C3p, -4, 1, L::C3p}},
      {0, L::D, {0, L::D, 2 * s2, 1, L::C1p}, {0, L::D, 0, 0, L::D}},
      {1, L::D, {1, L::D, 2 * s2, 0, L::C3p}, {1, L::D, 0, 1, L::D}},
  };
  return rows;
}

struct TableCheck {
  RealVector result;
  RealVector expected;
  double max_error = 0;
  bool match = false;
};

inline TableCheck verify_table_action(Part part, int central_bit, Label input, const Model& model = {},
                                      double tol = 1e-12) {
  for (const auto& row : action_table()) {
    if (row.central_bit != central_bit || row.input != input) continue;
    const TableEntry& e = part == Part::star ? row.star : row.ring;
    TableCheck out;
    out.result = (part == Part::star ? model.star() : model.ring()) * with_central(central_bit, outer(input));
    out.expected = e.coefficient == 0.0 ? RealVector(RealVector::Zero(kFullDim))
                                        : RealVector(e.coefficient * with_central(e.out_bit, outer(e.output)));
    out.max_error = (out.result - out.expected).cwiseAbs().maxCoeff();
    out.match = out.max_error <= tol;
    return out;
  }
  throw DomainError("action table has no row for |" + std::to_string(central_bit) + ">|" +
                    std::string(label_name(input)) + ">");
}

// ---------------------------------------------------------------------------
// interpolated levels

enum class Level { I, II };

/// Level I: gamma |0>|C3> + |1>(alpha |A> + beta |B>) and its partner.
/// Level II: gamma' |0>|C3'> + alpha' |1>|D> and its partner; beta is unused.
struct LevelCoefficients {
  Level level = Level::I;
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
  double residual = 0;
  bool flagged = false;  // ground degeneracy differed from 2

  double norm_squared() const { return alpha * alpha + beta * beta + gamma * gamma; }
};

struct PairConcurrences {
  double nn = 0;
  double nnn = 0;
};

inline PairConcurrences level_I_concurrences(const LevelCoefficients& k) {
  if (k.level != Level::I) throw DomainError("level_I_concurrences: coefficients belong to level II");
  const double a = k.alpha, b = k.beta, g = k.gamma;
  const double nn =
      2.0 * std::max(0.0, std::abs(g * g / 4.0 + a * b / std::numbers::sqrt2) - (g * g + b * b) / 4.0);
  const double nnn = 2.0 * std::max(0.0, 0.5 * (b * b - a * a));
  return {nn, nnn};
}

/// Both reduced states of level II are separable for every normalized (alpha', gamma').
inline PairConcurrences level_II_concurrences(const LevelCoefficients& k) {
  if (k.level != Level::II) throw DomainError("level_II_concurrences: coefficients belong to level I");
  return {0.0, 0.0};
}

namespace detail {

/// Unit vector spanning the ground subspace inside one magnetization sector.
inline RealVector sector_vector(const RealMatrix& basis, int ones) {
  RealMatrix proj = RealMatrix::Zero(basis.rows(), basis.cols());
  for (Eigen::Index b = 0; b < basis.rows(); ++b) {
    if (std::popcount(static_cast<unsigned>(b)) == ones) proj.row(b) = basis.row(b);
  }
  Eigen::JacobiSVD<RealMatrix> svd(proj, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > 1e-6 ? 1 : 0;
  if (rank != 1) {
    throw DomainError("extract_coefficients: ground subspace has " + std::to_string(rank) +
                      " directions in the sector with " + std::to_string(ones) + " flipped spins; expected 1");
  }
  return svd.matrixU().col(0);
}

struct Fit {
  std::vector<double> coeffs;
  double residual;
};

inline Fit fit(const RealVector& v, const std::vector<RealVector>& templates) {
  Fit f{{}, 0};
  RealVector r = v;
  for (const auto& t : templates) {
    const double c = t.dot(v);
    f.coeffs.push_back(c);
    r -= c * t;
  }
  f.residual = r.norm();
  return f;
}

}  // namespace detail

/// Fits the ground subspace to the level I or level II form. Gauge: gamma >= 0, and alpha >= 0
/// when gamma vanishes. The partner state must carry the same coefficients up to sign.
inline LevelCoefficients extract_coefficients(const GroundSubspace& ground, double tol = 1e-8) {
  if (ground.basis.rows() != kFullDim) throw DomainError("extract_coefficients: expected N = 4 with a central spin");
  const RealVector first = detail::sector_vector(ground.basis, 3);
  const RealVector second = detail::sector_vector(ground.basis, 2);

  const auto f1 = detail::fit(first, {with_central(0, outer(Label::C3)), with_central(1, outer(Label::A)),
                                      with_central(1, outer(Label::B))});
  const auto f2 = detail::fit(first, {with_central(0, outer(Label::C3p)), with_central(1, outer(Label::D))});

  LevelCoefficients k;
  k.flagged = ground.degeneracy != 2;
  double partner_residual = 0;
  if (f1.residual <= f2.residual) {
    k.level = Level::I;
    k.gamma = f1.coeffs[0];
    k.alpha = f1.coeffs[1];
    k.beta = f1.coeffs[2];
    const auto p = detail::fit(second, {with_central(0, outer(Label::A)), with_central(0, outer(Label::B)),
                                        with_central(1, outer(Label::C1))});
    partner_residual = std::max({p.residual, std::abs(std::abs(p.coeffs[0]) - std::abs(k.alpha)),
                                 std::abs(std::abs(p.coeffs[1]) - std::abs(k.beta)),
                                 std::abs(std::abs(p.coeffs[2]) - std::abs(k.gamma))});
    k.residual = std::max(f1.residual, partner_residual);
  } else {
    k.level = Level::II;
    k.gamma = f2.coeffs[0];
    k.alpha = f2.coeffs[1];
    const auto p = detail::fit(second, {with_central(0, outer(Label::D)), with_central(1, outer(Label::C1p))});
    partner_residual = std::max({p.residual, std::abs(std::abs(p.coeffs[0]) - std::abs(k.alpha)),
                                 std::abs(std::abs(p.coeffs[1]) - std::abs(k.gamma))});
    k.residual = std::max(f2.residual, partner_residual);
  }
  if (k.residual > tol) {
    throw DomainError("extract_coefficients: state not of postulated form (residual " + std::to_string(k.residual) +
                      ")");
  }
  const bool flip = k.gamma < -1e-12 || (std::abs(k.gamma) <= 1e-12 && k.alpha < 0);
  if (flip) {
    k.alpha = -k.alpha;
    k.beta = -k.beta;
    k.gamma = -k.gamma;
  }
  return k;
}

inline LevelCoefficients extract_coefficients(double c, const Model& model = {}) {
  return extract_coefficients(model.ground(c));
}

// ---------------------------------------------------------------------------
// regions and protocols

struct Region {
  double lo = 0;  // ring-side crossing
  double hi = 0;  // star-side crossing
  std::vector<LevelCrossing> crossings;

  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double c) const { return c > lo && c < hi; }
};

/// The interval between the two ground-level crossings, located by level tracking.
inline Region intermediate_region(double J = 1.0, int c_steps = 200) {
  const auto grid = uniform_grid(0.0, 1.0, c_steps);
  const auto track = track_levels(system(), J, grid, 2);
  std::vector<LevelCrossing> inside;
  for (const auto& x : track.crossings) {
    if (x.location() > 0.0 && x.location() < 1.0) inside.push_back(x);
  }
  if (inside.size() != 2) {
    throw DomainError("intermediate_region: expected two ground-level crossings, found " +
                      std::to_string(inside.size()));
  }
  return {inside[0].location(), inside[1].location(), inside};
}

enum class Outcome { D_state, C_state, other };

inline std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::D_state: return "D";
    case Outcome::C_state: return "C";
    case Outcome::other: return "other";
  }
  return "?";
}

struct GhzOutcome {
  Outcome outcome = Outcome::other;
  int central_bit = 0;
  double probability = 0;
  QuantumState post_state = QuantumState::basis(kOuterDim, 0);  // outer spins
  std::optional<Label> matched;
  double match_fidelity = 0;
  std::vector<double> bipartition_entropies;  // cuts {1},{2},{3},{4},{1,2},{1,3},{1,4}
  std::vector<double> pairwise_concurrences;  // (1,2),(1,3),(1,4),(2,3),(2,4),(3,4)
};

struct ProtocolReport {
  double c = 0;
  double field_h = 0;
  Region region;
  LevelCoefficients coefficients;
  /// <psi|P|psi> of the field-split ground state against the unperturbed ground projector.
  double subspace_fidelity = 0;
  std::vector<GhzOutcome> outcomes;
};

inline const std::vector<std::vector<int>>& bipartition_cuts() {
  static const std::vector<std::vector<int>> cuts = {{1}, {2}, {3}, {4}, {1, 2}, {1, 3}, {1, 4}};
  return cuts;
}

inline std::vector<double> bipartition_entropies(const QuantumState& outer_state) {
  const auto sys = SpinSystem::qubits(kOuter);
  std::vector<double> out;
  for (const auto& cut : bipartition_cuts()) out.push_back(von_neumann_entropy(partial_trace(outer_state, sys, cut)));
  return out;
}

inline std::vector<double> pairwise_concurrences(const QuantumState& outer_state) {
  const auto sys = SpinSystem::qubits(kOuter);
  std::vector<double> out;
  for (int i = 1; i <= kOuter; ++i) {
    for (int j = i + 1; j <= kOuter; ++j) out.push_back(concurrence(pair_rdm(outer_state, sys, i, j)).value);
  }
  return out;
}

namespace detail {

inline ProtocolReport run_protocol(double c, double field_h, const Model& model, Region region) {
  if (!(field_h > 0.0)) throw DomainError("protocol: field_h must be positive");
  const auto sys = system();
  const GroundSubspace unperturbed = model.ground(c);
  ProtocolReport rep;
  rep.c = c;
  rep.field_h = field_h;
  rep.region = std::move(region);
  rep.coefficients = extract_coefficients(unperturbed);

  HermitianOperator h = model.combined(c);
  h.matrix += field_h * total_sz(sys).matrix;
  const GroundSubspace split = ground_subspace(eigendecompose(h));
  if (split.degeneracy != 1) {
    throw DomainError("protocol: field left a " + std::to_string(split.degeneracy) + "-fold ground level");
  }
  const RealVector psi = split.basis.col(0);
  rep.subspace_fidelity = (unperturbed.basis.transpose() * psi).squaredNorm();

  const std::vector<std::pair<Label, Outcome>> candidates = {
      {Label::D, Outcome::D_state}, {Label::C1p, Outcome::C_state}, {Label::C3p, Outcome::C_state},
      {Label::C1, Outcome::C_state}, {Label::C3, Outcome::C_state}};
  for (int bit : {0, 1}) {
    const RealVector branch = psi.segment(bit * kOuterDim, kOuterDim);
    const double p = branch.squaredNorm();
    if (p < 1e-14) continue;
    GhzOutcome o;
    o.central_bit = bit;
    o.probability = p;
    o.post_state = QuantumState::normalized(branch.cast<Complex>());
    for (const auto& [label, kind] : candidates) {
      const double f = fidelity(o.post_state, QuantumState::pure(outer(label)));
      if (f > o.match_fidelity) {
        o.match_fidelity = f;
        o.matched = label;
        o.outcome = kind;
      }
    }
    if (o.match_fidelity < 1.0 - 1e-6) {
      o.outcome = Outcome::other;
      o.matched.reset();
    }
    o.bipartition_entropies = bipartition_entropies(o.post_state);
    o.pairwise_concurrences = pairwise_concurrences(o.post_state);
    rep.outcomes.push_back(std::move(o));
  }
  return rep;
}

inline std::string bounds_text(const Region& r) {
  return "(" + std::to_string(r.lo) + ", " + std::to_string(r.hi) + ")";
}

}  // namespace detail

/// Uniform field h * sum sz splits the level II pair; measuring the central spin then leaves
/// |D> (central 1) or |C3'> (central 0) on the outer spins.
inline ProtocolReport ghz_protocol(double c, double field_h = 1e-3, const Model& model = {}) {
  Region region = intermediate_region(model.J);
  if (!region.contains(c)) {
    throw DomainError("ghz_protocol: c = " + std::to_string(c) + " is outside the intermediate region " +
                      detail::bounds_text(region));
  }
  return detail::run_protocol(c, field_h, model, std::move(region));
}

/// Same procedure on the star side of the intermediate region, where level I is the ground level.
inline ProtocolReport star_region_protocol(double c, double field_h = 1e-3, const Model& model = {}) {
  Region region = intermediate_region(model.J);
  if (!(c > region.hi && c <= 1.0)) {
    throw DomainError("star_region_protocol: c = " + std::to_string(c) + " is outside the star region (" +
                      std::to_string(region.hi) + ", 1]");
  }
  return detail::run_protocol(c, field_h, model, std::move(region));
}

// ---------------------------------------------------------------------------
// aggregate check

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckItem> items;

  bool all_passed() const {
    for (const auto& i : items) {
      if (!i.passed) return false;
    }
    return true;
  }
  int failures() const {
    int n = 0;
    for (const auto& i : items) n += i.passed ? 0 : 1;
    return n;
  }
};

struct VerifyOptions {
  Model model;
  std::vector<double> ring_side = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> star_side = {0.8, 0.85, 0.9, 0.95, 1.0};
  double tol = 1e-8;
};

inline PairConcurrences pipeline_concurrences(const GroundSubspace& g) {
  const auto sys = system();
  return {concurrence(pair_rdm(g.density, sys, 1, 2)).value, concurrence(pair_rdm(g.density, sys, 1, 3)).value};
}

/// Table rows, closed form against full diagonalization, and coefficient endpoints.
inline VerifyReport verify(const VerifyOptions& opt = {}) {
  VerifyReport rep;
  auto add = [&](std::string name, bool ok, std::string detail) {
    rep.items.push_back({std::move(name), ok, std::move(detail)});
  };
  auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return std::string(buf);
  };

  for (const auto& row : action_table()) {
    const auto s = verify_table_action(Part::star, row.central_bit, row.input, opt.model);
    const auto r = verify_table_action(Part::ring, row.central_bit, row.input, opt.model);
    add("table |" + std::to_string(row.central_bit) + ">|" + std::string(label_name(row.input)) + ">",
        s.match && r.match, "star err " + num(s.max_error) + ", ring err " + num(r.max_error));
  }

  auto closed_form_check = [&](double c) {
    const std::string name = "closed form c=" + num(c);
    try {
      const auto g = opt.model.ground(c);
      const auto k = extract_coefficients(g, opt.tol);
      if (k.level != Level::I) {
        add(name, false, "ground is not level I");
        return;
      }
      const auto cf = level_I_concurrences(k);
      const auto pl = pipeline_concurrences(g);
      const double err = std::max(std::abs(cf.nn - pl.nn), std::abs(cf.nnn - pl.nnn));
      add(name, err <= opt.tol, "max |closed - pipeline| = " + num(err));
    } catch (const DomainError& e) {
      add(name, false, e.what());
    }
  };
  for (double c : opt.ring_side) closed_form_check(c);
  for (double c : opt.star_side) closed_form_check(c);

  auto endpoint = [&](double c, double a, double b, double g) {
    const std::string name = "coefficients c=" + num(c);
    try {
      const auto k = extract_coefficients(opt.model.ground(c), opt.tol);
      const double err = std::max({std::abs(k.alpha - a), std::abs(k.beta - b), std::abs(k.gamma - g)});
      add(name, k.level == Level::I && err <= opt.tol, "max deviation " + num(err));
    } catch (const DomainError& e) {
      add(name, false, e.what());
    }
  };
  const double r2 = 1.0 / std::numbers::sqrt2;
  endpoint(0.0, r2, -r2, 0.0);
  endpoint(1.0, -std::sqrt(1.0 / 6.0), -std::sqrt(2.0 / 6.0), r2);

  try {
    const Region region = intermediate_region(opt.model.J);
    const auto g = opt.model.ground(region.midpoint());
    const auto k = extract_coefficients(g, opt.tol);
    const auto pl = pipeline_concurrences(g);
    add("level II at c=" + num(region.midpoint()), k.level == Level::II && pl.nn < 1e-10 && pl.nnn < 1e-10,
        "C_nn " + num(pl.nn) + ", C_nnn " + num(pl.nnn));
  } catch (const DomainError& e) {
    add("level II", false, e.what());
  }
  return rep;
}

}  // namespace spinweb::n4
