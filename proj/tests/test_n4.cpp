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

#include <numbers>

#include "oracles.hpp"
#include "spinweb/n4_analytic.hpp"

using namespace spinweb;
namespace n4 = spinweb::n4;

namespace {

int ones(const RealVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) return std::popcount(static_cast<unsigned>(i));
  }
  return -1;
}

const double kR2 = 1.0 / std::numbers::sqrt2;

}  // namespace

TEST(NamedStates, NormalizedAndOrthogonalWithinSectors) {
  for (auto a : n4::kAllLabels) {
    const RealVector va = n4::outer(a);
    EXPECT_NEAR(va.norm(), 1.0, 1e-15) << n4::label_name(a);
    for (auto b : n4::kAllLabels) {
      if (a == b || ones(va) != ones(n4::outer(b))) continue;
      const bool related = (a == n4::Label::j2m0) != (b == n4::Label::j2m0) &&
                           (a == n4::Label::A || a == n4::Label::B || b == n4::Label::A || b == n4::Label::B);
      if (related) continue;
      EXPECT_NEAR(va.dot(n4::outer(b)), 0.0, 1e-15) << n4::label_name(a) << " " << n4::label_name(b);
    }
  }
}

TEST(NamedStates, ExplicitAmplitudes) {
  const RealVector d = n4::outer(n4::Label::D);
  EXPECT_NEAR(d(0b0101), kR2, 1e-15);
  EXPECT_NEAR(d(0b1010), -kR2, 1e-15);
  EXPECT_NEAR(n4::outer(n4::Label::j2m0).dot(n4::outer(n4::Label::A)), std::sqrt(2.0 / 6.0), 1e-15);
  EXPECT_NEAR(n4::outer(n4::Label::j2m0).dot(n4::outer(n4::Label::B)), 2.0 / std::sqrt(6.0), 1e-15);
  EXPECT_EQ(n4::outer(n4::Label::C1p)(0b0010), -0.5);
  EXPECT_EQ(n4::parse_label("C3p"), n4::Label::C3p);
  EXPECT_THROW(n4::parse_label("E"), DomainError);
}

TEST(NamedStates, RotationInvariantUpToSign) {
  const RealMatrix shift = cyclic_shift(SpinSystem::qubits(4));
  for (auto l : n4::kAllLabels) {
    const RealVector v = n4::outer(l);
    const double overlap = v.dot(shift * v);
    const bool primed = l == n4::Label::C1p || l == n4::Label::C3p || l == n4::Label::D;
    EXPECT_NEAR(overlap, primed ? -1.0 : 1.0, 1e-14) << n4::label_name(l);
  }
}

class ActionTable : public ::testing::TestWithParam<std::size_t> {};

TEST_P(ActionTable, RowReproduced) {
  const auto& row = n4::action_table().at(GetParam());
  for (auto part : {n4::Part::star, n4::Part::ring}) {
    const auto check = n4::verify_table_action(part, row.central_bit, row.input);
    EXPECT_TRUE(check.match) << n4::part_name(part) << " |" << row.central_bit << ">|" << n4::label_name(row.input)
                             << "> error " << check.max_error;
  }
}

INSTANTIATE_TEST_SUITE_P(AllRows, ActionTable, ::testing::Range<std::size_t>(0, 14));

TEST(ActionTableChecks, UnlistedInputAndPerturbation) {
  EXPECT_EQ(n4::action_table().size(), 14u);
  EXPECT_THROW(n4::verify_table_action(n4::Part::star, 0, n4::Label::ZERO4), DomainError);
  const n4::Model off{1.0, 0.05};
  EXPECT_FALSE(n4::verify_table_action(n4::Part::ring, 0, n4::Label::A, off).match);
}

TEST(ClosedForms, StarEndpointNextNeighbour) {
  n4::LevelCoefficients k{n4::Level::I, -std::sqrt(1.0 / 6.0), -std::sqrt(2.0 / 6.0), kR2, 0, false};
  EXPECT_NEAR(n4::level_I_concurrences(k).nnn, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(k.norm_squared(), 1.0, 1e-15);
}

TEST(ClosedForms, EqualAlphaBetaGivesNoNextNeighbourEntanglement) {
  for (double g : {0.0, 0.3, 0.7}) {
    const double ab = std::sqrt((1 - g * g) / 2);
    EXPECT_EQ(n4::level_I_concurrences({n4::Level::I, ab, ab, g, 0, false}).nnn, 0.0);
  }
}

TEST(ClosedForms, LevelTwoAlwaysSeparable) {
  for (double a : {0.0, 0.4, 0.6, 1.0}) {
    const n4::LevelCoefficients k{n4::Level::II, a, 0.0, std::sqrt(1 - a * a), 0, false};
    const auto cc = n4::level_II_concurrences(k);
    EXPECT_EQ(cc.nn, 0.0);
    EXPECT_EQ(cc.nnn, 0.0);
    EXPECT_THROW(n4::level_I_concurrences(k), DomainError);
  }
  EXPECT_THROW(n4::level_II_concurrences({}), DomainError);
}

TEST(ClosedForms, LevelTwoStateReducedMatricesAreSeparable) {
  // independent of diagonalization: build the postulated state directly
  const auto sys = n4::system();
  for (double a : {0.0, 0.5, 0.6, 1.0}) {
    const double g = std::sqrt(1 - a * a);
    const RealVector s1 = g * n4::with_central(0, n4::outer(n4::Label::C3p)) + a * n4::with_central(1, n4::outer(n4::Label::D));
    const RealVector s2 = a * n4::with_central(0, n4::outer(n4::Label::D)) - g * n4::with_central(1, n4::outer(n4::Label::C1p));
    const ComplexMatrix rho = 0.5 * (s1 * s1.transpose() + s2 * s2.transpose()).cast<Complex>();
    const auto st = QuantumState::mixed(rho);
    EXPECT_LT(concurrence_wootters(pair_rdm(st, sys, 1, 2)).value, 1e-7);
    EXPECT_LT(concurrence_wootters(pair_rdm(st, sys, 1, 3)).value, 1e-7);
  }
}

TEST(Coefficients, Endpoints) {
  const auto k0 = n4::extract_coefficients(0.0);
  EXPECT_EQ(k0.level, n4::Level::I);
  EXPECT_NEAR(k0.alpha, kR2, 1e-8);
  EXPECT_NEAR(k0.beta, -kR2, 1e-8);
  EXPECT_NEAR(k0.gamma, 0.0, 1e-8);
  const auto k1 = n4::extract_coefficients(1.0);
  EXPECT_NEAR(k1.alpha, -std::sqrt(1.0 / 6.0), 1e-8);
  EXPECT_NEAR(k1.beta, -std::sqrt(2.0 / 6.0), 1e-8);
  EXPECT_NEAR(k1.gamma, kR2, 1e-8);
  EXPECT_FALSE(k0.flagged);
  EXPECT_FALSE(k1.flagged);
}

TEST(Coefficients, PostulatedFormsAreExactAcrossTheSweep) {
  const auto region = n4::intermediate_region();
  for (const double c : uniform_grid(0.0, 1.0, 100)) {
    if (std::abs(c - region.lo) < 1e-3 || std::abs(c - region.hi) < 1e-3) continue;
    const auto g = n4::Model{}.ground(c);
    const auto k = n4::extract_coefficients(g);
    EXPECT_LT(k.residual, 1e-8) << c;
    EXPECT_NEAR(k.norm_squared(), 1.0, 1e-10) << c;
    EXPECT_EQ(k.level, region.contains(c) ? n4::Level::II : n4::Level::I) << c;
    const auto pipe = n4::pipeline_concurrences(g);
    if (k.level == n4::Level::I) {
      const auto cf = n4::level_I_concurrences(k);
      EXPECT_NEAR(cf.nn, pipe.nn, 1e-8) << c;
      EXPECT_NEAR(cf.nnn, pipe.nnn, 1e-8) << c;
      if (c > region.hi) {
        EXPECT_GT(k.alpha * k.beta, 0.0) << c;
        EXPECT_LT(k.alpha * k.gamma, 0.0) << c;
      } else if (c > 0.0) {
        EXPECT_LT(k.alpha * k.beta, 0.0) << c;
      }
    } else {
      EXPECT_LT(pipe.nn, 1e-10) << c;
      EXPECT_LT(pipe.nnn, 1e-10) << c;
      EXPECT_GE(k.gamma, 0.0);
    }
  }
}

TEST(Coefficients, IntermediateAmplitude) {
  const auto region = n4::intermediate_region();
  const auto k = n4::extract_coefficients(region.midpoint());
  ASSERT_EQ(k.level, n4::Level::II);
  EXPECT_GE(k.alpha * k.alpha, 0.25);
  EXPECT_LE(k.alpha * k.alpha, 0.36);
  EXPECT_NEAR(k.alpha * k.alpha + k.gamma * k.gamma, 1.0, 1e-10);
  const auto pipe = n4::pipeline_concurrences(n4::Model{}.ground(0.72));
  EXPECT_LT(pipe.nn, 1e-10);
  EXPECT_LT(pipe.nnn, 1e-10);
}

TEST(Coefficients, RejectsOtherFormsAndSizes) {
  EXPECT_THROW(n4::extract_coefficients(n4::Model{1.0, 0.3}.ground(0.3)), DomainError);
  const auto g5 = ground_subspace(eigendecompose(build_ring(SpinSystem::with_central(5), 1.0)));
  EXPECT_THROW(n4::extract_coefficients(g5), DomainError);
}

TEST(Region, TwoCrossingsStraddleSevenTenths) {
  const auto r = n4::intermediate_region();
  EXPECT_EQ(r.crossings.size(), 2u);
  EXPECT_LT(r.lo, 0.7);
  EXPECT_GT(r.hi, 0.7);
  EXPECT_TRUE(r.contains(r.midpoint()));
}

TEST(Ghz, IntermediateMidpoint) {
  const auto region = n4::intermediate_region();
  const auto rep = n4::ghz_protocol(region.midpoint(), 1e-3);
  ASSERT_EQ(rep.outcomes.size(), 2u);
  double total = 0;
  for (const auto& o : rep.outcomes) total += o.probability;
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_GT(rep.subspace_fidelity, 1 - 1e-6);
  const auto& k = rep.coefficients;
  for (const auto& o : rep.outcomes) {
    if (o.outcome == n4::Outcome::D_state) {
      EXPECT_EQ(o.central_bit, 1);
      EXPECT_NEAR(o.probability, k.alpha * k.alpha, 1e-8);
      EXPECT_GE(o.probability, 0.25);
      EXPECT_LE(o.probability, 0.36);
      EXPECT_GT(fidelity(o.post_state, QuantumState::pure(n4::outer(n4::Label::D))), 1 - 1e-8);
      ASSERT_EQ(o.bipartition_entropies.size(), 7u);
      for (double s : o.bipartition_entropies) EXPECT_NEAR(s, 1.0, 1e-8);
      for (int q = 1; q <= 4; ++q) {
        const ComplexMatrix one = partial_trace(o.post_state, SpinSystem::qubits(4), {q}).density();
        EXPECT_LT((one - ComplexMatrix::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff(), 1e-10);
      }
    } else {
      ASSERT_EQ(o.outcome, n4::Outcome::C_state);
      ASSERT_TRUE(o.matched);
      EXPECT_TRUE(*o.matched == n4::Label::C1p || *o.matched == n4::Label::C3p);
      ASSERT_EQ(o.pairwise_concurrences.size(), 6u);
      for (double c : o.pairwise_concurrences) EXPECT_NEAR(c, 0.5, 1e-8);
    }
  }
}

TEST(Ghz, OutsideRegionNamesBounds) {
  try {
    n4::ghz_protocol(0.1);
    FAIL() << "expected a region error";
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("intermediate region ("), std::string::npos) << msg;
  }
  EXPECT_THROW(n4::ghz_protocol(0.65, 0.0), DomainError);
}

TEST(StarProtocol, ProbabilityMatchesGammaSquared) {
  for (double c : {0.9, 0.95, 1.0}) {
    const auto rep = n4::star_region_protocol(c);
    const auto& k = rep.coefficients;
    bool seen = false;
    for (const auto& o : rep.outcomes) {
      if (o.outcome != n4::Outcome::C_state) continue;
      seen = true;
      EXPECT_NEAR(o.probability, k.gamma * k.gamma, 1e-8);
      EXPECT_NEAR(o.probability, 0.49, 0.03) << c;
      EXPECT_TRUE(*o.matched == n4::Label::C1 || *o.matched == n4::Label::C3);
      for (double x : o.pairwise_concurrences) {
        EXPECT_NEAR(x, 0.5, 1e-8);
        EXPECT_NEAR(x, o.pairwise_concurrences.front(), 1e-10);
      }
      if (c == 1.0) EXPECT_NEAR(o.probability, 0.5, 1e-10);
    }
    EXPECT_TRUE(seen) << c;
  }
  EXPECT_THROW(n4::star_region_protocol(0.65), DomainError);
}

TEST(Verify, CleanModelPassesAndPerturbedFailsItemized) {
  const auto clean = n4::verify();
  for (const auto& i : clean.items) EXPECT_TRUE(i.passed) << i.name << ": " << i.detail;
  EXPECT_GE(clean.items.size(), 14u + 13u);
  n4::VerifyOptions opt;
  opt.model.perturbation = 0.05;
  const auto bad = n4::verify(opt);
  EXPECT_FALSE(bad.all_passed());
  int table_failures = 0;
  for (const auto& i : bad.items) table_failures += (!i.passed && i.name.rfind("table", 0) == 0) ? 1 : 0;
  EXPECT_GT(table_failures, 0);
}
