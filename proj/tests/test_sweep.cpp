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

#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "spinweb/sweep.hpp"

using namespace spinweb;

namespace {

SweepConfig config(int n, int steps = 400) {
  SweepConfig cfg;
  cfg.n_outer = n;
  cfg.c_grid = uniform_grid(0.0, 1.0, steps);
  return cfg;
}

const SweepRecord& at(const std::vector<SweepRecord>& recs, double c) {
  for (const auto& r : recs) {
    if (std::abs(r.c - c) < 1e-12) return r;
  }
  throw std::out_of_range("no record at c");
}

}  // namespace

TEST(Sweep, FieldBoundsHoldEverywhere) {
  for (int n : {4, 5}) {
    const auto recs = run_sweep(config(n));
    ASSERT_EQ(recs.size(), 401u);
    for (const auto& r : recs) {
      for (const auto& p : r.pairs) {
        EXPECT_GE(p.concurrence, 0.0);
        EXPECT_LE(p.concurrence, 1.0);
        EXPECT_GE(p.xx, -1.0);
        EXPECT_LE(p.xx, 1.0);
        EXPECT_GE(p.zz, -1.0);
        EXPECT_LE(p.zz, 1.0);
      }
      EXPECT_GE(r.O_r, 0.0);
      EXPECT_LE(r.O_r, 1.0);
      EXPECT_GE(r.O_s, 0.0);
      EXPECT_LE(r.O_s, 1.0);
      EXPECT_GE(r.ground_degeneracy, 1);
    }
    for (std::size_t i = 1; i < recs.size(); ++i) EXPECT_GT(recs[i].c, recs[i - 1].c);
  }
}

TEST(Sweep, SelfFidelityAtEndpoints) {
  const auto recs = run_sweep(config(4, 10));
  EXPECT_NEAR(recs.front().O_r, 1.0, 1e-10);
  EXPECT_NEAR(recs.back().O_s, 1.0, 1e-10);
}

TEST(Sweep, FivePlainRingReferenceIsSuppressed) {
  auto cfg = config(5, 100);
  const auto plain = run_sweep(cfg);
  EXPECT_NEAR(plain[1].O_r, 0.2, 0.05);
  cfg.refs.ring_eps = 0.01;
  const auto lifted = run_sweep(cfg);
  EXPECT_NEAR(lifted[1].O_r, 1.0, 1e-10);
  EXPECT_GT(lifted[10].O_r, 0.9);
}

TEST(Sweep, FourSpinEntanglementVanishesAroundSevenTenths) {
  const auto recs = run_sweep(config(4));
  const auto& mid = at(recs, 0.7);
  EXPECT_LT(mid.C_nn(), 1e-10);
  EXPECT_LT(mid.C_nnn(), 1e-10);
  int zero_run = 0;
  for (const auto& r : recs) zero_run += (r.C_nn() < 1e-10 && r.C_nnn() < 1e-10) ? 1 : 0;
  EXPECT_GT(zero_run, 20);
}

TEST(Sweep, FiveSpinInitialRise) {
  const auto recs = run_sweep(config(5, 20));
  EXPECT_GT(recs[1].C_nn(), recs[0].C_nn());
}

TEST(Sweep, FourSpinNextNeighbourMaximumIsInterior) {
  const auto recs = run_sweep(config(4));
  std::size_t best = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].C_nnn() > recs[best].C_nnn()) best = i;
  }
  EXPECT_LT(recs[best].c, 1.0);
  EXPECT_GT(recs[best].C_nnn(), recs.back().C_nnn());
}

TEST(Sweep, RingAndStarLikeRegions) {
  const auto recs = run_sweep(config(4));
  int ring_like = 0, star_like = 0;
  for (const auto& r : recs) {
    if (r.c < 0.7 && r.O_r > 0.9) ++ring_like;
    if (r.c > 0.7 && r.O_s > 0.9) ++star_like;
  }
  EXPECT_GT(ring_like, 100);
  EXPECT_GT(star_like, 50);
}

TEST(Sweep, JumpsSitInsideCrossingIntervals) {
  for (int n = 4; n <= 7; ++n) {
    const auto cfg = config(n);
    const auto recs = run_sweep(cfg);
    const auto track = sweep_crossings(cfg);
    for (std::size_t i = 1; i < recs.size(); ++i) {
      const double jump = std::max(std::abs(recs[i].C_nn() - recs[i - 1].C_nn()),
                                   std::abs(recs[i].C_nnn() - recs[i - 1].C_nnn()));
      if (jump <= 0.05) continue;
      bool covered = false;
      for (const auto& x : track.crossings) {
        covered = covered || (x.c_lo >= recs[i - 1].c && x.c_hi <= recs[i].c);
      }
      EXPECT_TRUE(covered) << "N=" << n << " jump " << jump << " at c=" << recs[i].c;
    }
  }
}

TEST(Sweep, DeterministicAcrossRunsAndWorkerCounts) {
  auto cfg = config(5, 40);
  cfg.refs.ansatz = true;
  cfg.workers = 1;
  const auto a = run_sweep(cfg);
  cfg.workers = 3;
  const auto b = run_sweep(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].ground_energy, b[i].ground_energy);
    EXPECT_EQ(a[i].O_r, b[i].O_r);
    EXPECT_EQ(a[i].O_s, b[i].O_s);
    EXPECT_EQ(a[i].O_p, b[i].O_p);
    for (std::size_t p = 0; p < a[i].pairs.size(); ++p) {
      EXPECT_EQ(a[i].pairs[p].concurrence, b[i].pairs[p].concurrence);
      EXPECT_EQ(a[i].pairs[p].xx, b[i].pairs[p].xx);
      EXPECT_EQ(a[i].pairs[p].zz, b[i].pairs[p].zz);
    }
  }
}

TEST(Sweep, ConfigValidation) {
  auto cfg = config(4, 4);
  cfg.c_grid = {0.2, 0.1};
  EXPECT_THROW(run_sweep(cfg), DomainError);
  cfg = config(4, 4);
  cfg.pairs = {{"bad", 1, 1}};
  EXPECT_THROW(run_sweep(cfg), DomainError);
  cfg.pairs = {{"bad", 1, 7}};
  EXPECT_THROW(run_sweep(cfg), DomainError);
  cfg = config(4, 4);
  cfg.n_levels = 0;
  EXPECT_THROW(run_sweep(cfg), DomainError);
}

TEST(Sweep, ErrorsNameTheOffendingC) {
  auto cfg = config(2, 4);
  try {
    run_sweep(cfg);
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("at c = 0.000000"), std::string::npos) << e.what();
  }
  cfg.ring.allow_double_bond = true;
  EXPECT_NO_THROW(run_sweep(cfg));
}

TEST(Sweep, DefaultPairsAndLowEnergies) {
  auto cfg = config(6, 4);
  cfg.n_levels = 3;
  const auto recs = run_sweep(cfg);
  ASSERT_EQ(recs[0].pairs.size(), 2u);
  ASSERT_EQ(recs[0].low_energies.size(), 3u);
  EXPECT_EQ(recs[0].low_energies[0], recs[0].ground_energy);
  EXPECT_LT(recs[0].low_energies[0], recs[0].low_energies[1]);
  const auto pairs = default_pairs(SpinSystem::with_central(6));
  EXPECT_EQ(pairs[0].b, 2);
  EXPECT_EQ(pairs[1].b, 3);
  EXPECT_EQ(default_pairs(SpinSystem::with_central(2))[1].b, 2);
}

TEST(Sweep, ShortcutMatchesWoottersOnSweepStates) {
  for (int n = 4; n <= 7; ++n) {
    for (const auto& r : run_sweep(config(n, 100))) {
      for (const auto& p : r.pairs) EXPECT_NEAR(p.concurrence, p.concurrence_wootters, 1e-9);
    }
  }
}

// ---------------------------------------------------------------------------

TEST(SingletAnsatz, CoveringCounts) {
  EXPECT_EQ(singlet_coverings(4).size(), 2u);
  EXPECT_EQ(singlet_coverings(6).size(), 2u);
  EXPECT_EQ(singlet_coverings(5).size(), 5u);
  EXPECT_EQ(singlet_coverings(7).size(), 7u);
  EXPECT_THROW(singlet_coverings(2), DomainError);
  for (int n = 3; n <= 7; ++n) {
    for (const auto& p : singlet_coverings(n)) {
      std::vector<int> seen;
      for (auto [a, b] : p) {
        seen.push_back(a);
        seen.push_back(b);
      }
      std::sort(seen.begin(), seen.end());
      EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
      EXPECT_EQ(seen.size(), static_cast<std::size_t>(n % 2 == 0 ? n : n + 1));
    }
  }
}

TEST(SingletAnsatz, TermsAreSingletProducts) {
  for (int n : {4, 5}) {
    const auto sys = SpinSystem::with_central(n);
    for (const auto& p : singlet_coverings(n)) {
      const auto st = QuantumState::pure(covering_vector(sys, p));
      for (auto [a, b] : p) {
        const auto rdm = pair_rdm(st, sys, a, b);
        EXPECT_NEAR(concurrence(rdm).value, 1.0, 1e-10);
        EXPECT_NEAR(correlation(st, sys, Axis::z, a, b), -1.0, 1e-12);
        EXPECT_NEAR(correlation(st, sys, Axis::x, a, b), -1.0, 1e-12);
      }
    }
  }
}

TEST(SingletAnsatz, UniformPhasesGiveNormalizedSumOfCoverings) {
  const std::vector<Complex> ones(2, 1.0);
  const auto st = build_singlet_ansatz(4, ones);
  const auto sys = SpinSystem::with_central(4);
  ComplexVector sum = covering_vector(sys, singlet_coverings(4)[0]) + covering_vector(sys, singlet_coverings(4)[1]);
  EXPECT_LT((st.amplitudes() - sum.normalized()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(st.amplitudes().norm(), 1.0, 1e-14);
  EXPECT_THROW(build_singlet_ansatz(4, std::vector<Complex>(3, 1.0)), DomainError);
  EXPECT_THROW(build_singlet_ansatz(4, std::vector<Complex>{1.0, 2.0}), DomainError);
}

TEST(SingletAnsatz, OddRotationCovariance) {
  for (int n : {5, 7}) {
    const auto sys = SpinSystem::with_central(n);
    const RealMatrix shift = cyclic_shift(sys);
    for (int q = 0; q < n; ++q) {
      std::vector<Complex> phases;
      for (int k = 0; k < n; ++k) phases.push_back(std::polar(1.0, 2 * std::numbers::pi * q * k / n));
      const auto st = build_singlet_ansatz(n, phases);
      const ComplexVector moved = shift.cast<Complex>() * st.amplitudes();
      EXPECT_NEAR(std::abs(st.amplitudes().dot(moved)), 1.0, 1e-12) << n << " " << q;
    }
  }
}

TEST(SingletAnsatz, OptimizerRecoversKnownPhases) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  for (int n : {4, 5}) {
    const std::size_t k = singlet_coverings(n).size();
    std::vector<Complex> phases;
    for (std::size_t i = 0; i < k; ++i) phases.push_back(std::polar(1.0, i == 0 ? 0.0 : u(rng)));
    const auto target = build_singlet_ansatz(n, phases);
    const auto fit = optimize_ansatz_phases(n, target);
    EXPECT_NEAR(fit.fidelity, 1.0, 1e-9) << n;
    const Complex g = fit.phases[0] / phases[0];
    for (std::size_t i = 0; i < k; ++i) EXPECT_LT(std::abs(fit.phases[i] - g * phases[i]), 1e-4) << n << " " << i;
    EXPECT_NEAR(ansatz_fidelity(n, build_singlet_ansatz(n, fit.phases), target), fit.fidelity, 1e-9);
  }
}

TEST(SingletAnsatz, FourSpinRingSideAndStarSide) {
  const auto sys = SpinSystem::with_central(4);
  const auto near_ring = ground_at(sys, 1.0, 0.05);
  const auto fit = optimize_ansatz_phases(4, near_ring.density);
  EXPECT_GT(fit.fidelity, 0.97);
  EXPECT_NEAR(ansatz_fidelity(4, build_singlet_ansatz(4, fit.phases), near_ring.density), fit.fidelity, 1e-9);
  const auto star_side = optimize_ansatz_phases(4, ground_at(sys, 1.0, 0.9).density);
  EXPECT_LT(star_side.fidelity, fit.fidelity - 0.5);
}

TEST(SingletAnsatz, SixSpinPeak) {
  auto cfg = config(6, 100);
  cfg.refs.ansatz = true;
  double peak = 0;
  for (const auto& r : run_sweep(cfg)) peak = std::max(peak, r.O_p.value());
  EXPECT_GE(peak, 0.88);
  EXPECT_LE(peak, 1.0);
}
