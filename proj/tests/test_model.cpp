//------------------------------------------------------------------------------
//
//   Copyright 2026 The xmkt Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "xmkt/errors.hpp"
#include "xmkt/model.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

using namespace xmkt;

namespace {

PiecewisePolynomial const kOneMinusT({0.0, 1.0}, {{1.0, -1.0}});
PiecewisePolynomial const kOne = PiecewisePolynomial::constant(1.0);

Profile worked_profile()
{
  return Profile({offender(kOneMinusT, 300.0), defender(kOne, 10.0)});
}

PiecewisePolynomial random_density(std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(0.0, 5.0);
  std::uniform_real_distribution<double> cut(0.1, 0.9);
  return PiecewisePolynomial({0.0, cut(rng), 1.0}, {{u(rng), u(rng)}, {u(rng), 0.0, u(rng)}});
}

}  // namespace

TEST(ValueOfOutcome, WorkedProfile)
{
  auto const p = worked_profile();
  EXPECT_NEAR(value_of_outcome(p[0], Deterministic{0.975}), 149.90625, 1e-12);
  EXPECT_NEAR(value_of_outcome(p[1], Deterministic{0.975}), 0.25, 1e-12);
  EXPECT_EQ(value_of_outcome(p[0], Randomized{0.0, 0.7}), 0.0);
  EXPECT_NEAR(value_of_outcome(p[1], Randomized{0.0, 0.7}), 10.0, 1e-12);
}

TEST(ValueOfOutcome, UnresolvedAgentIsModelError)
{
  Agent const pending = offender(kOneMinusT, std::nullopt, Distribution::uniform(160.0, 400.0));
  EXPECT_THROW(value_of_outcome(pending, Deterministic{0.5}), ModelError);
}

TEST(ValueOfOutcome, GeneralModelAgentUsesWeightAsDensity)
{
  Agent const a = offender(PiecewisePolynomial::linear(2.0, -2.0));
  EXPECT_NEAR(value_of_outcome(a, Deterministic{1.0}), 1.0, 1e-15);
}

TEST(Outcome, SurvivalRejectsOutOfRange)
{
  EXPECT_THROW(survival(Randomized{1.2, 0.5}), DomainError);
  EXPECT_THROW(survival(Deterministic{-0.1}), DomainError);
  EXPECT_EQ(survival(Deterministic{0.3}), (Randomized{1.0, 0.3}));
}

TEST(TotalWelfare, Examples)
{
  auto const   p = worked_profile();
  double const t = 29.0 / 30.0;
  double const w = total_welfare(p, Deterministic{t}, std::vector<double>{1.0, 1.0});
  EXPECT_NEAR(w, 300.0 * (t - t * t / 2.0) + 10.0 * (1.0 - t), 1e-12);
  EXPECT_NEAR(w, 150.16666666666666, 1e-9);

  double const b = 17.0 / 30.0;
  EXPECT_NEAR(total_welfare(p, Randomized{1.0, b}, std::vector<double>{1.0, 13.0}),
              300.0 * (b - b * b / 2.0) + 13.0 * 10.0 * (1.0 - b), 1e-12);
  EXPECT_NEAR(total_welfare(p, Randomized{1.0, b}, std::vector<double>{1.0, 13.0}), 178.1666667, 1e-6);

  Profile const silent({offender(kOneMinusT, 0.0), defender(kOne, 10.0)});
  EXPECT_NEAR(total_welfare(silent, Deterministic{0.4}, std::vector<double>{1.0, 1.0}), 6.0, 1e-12);
}

TEST(TotalWelfare, RejectsNonPositiveWeights)
{
  EXPECT_THROW(total_welfare(worked_profile(), Deterministic{0.5}, std::vector<double>{1.0, 0.0}),
               DomainError);
  EXPECT_THROW(total_welfare(worked_profile(), Deterministic{0.5}, std::vector<double>{1.0}),
               DomainError);
}

TEST(Profile, Validation)
{
  EXPECT_THROW(Profile(std::vector<Agent>{}), InvariantError);
  EXPECT_THROW(Profile({offender(kOne, -1.0)}), InvariantError);
  EXPECT_THROW(Profile({offender(kOne, std::nullopt, Distribution::uniform(0.0, 1.0))}), ModelError);
  EXPECT_EQ(worked_profile().with_theta(0, 200.0)[0].theta, 200.0);
}

TEST(MechanismResult, UtilitiesAreValuationMinusPayment)
{
  auto const r = make_result(worked_profile(), Deterministic{0.975}, {102.375, 0.21875});
  ASSERT_EQ(r.utilities.size(), 2U);
  for (std::size_t i = 0; i < 2; ++i)
  {
    EXPECT_DOUBLE_EQ(r.utilities[i], r.valuations[i] - r.payments[i]);
  }
  EXPECT_DOUBLE_EQ(r.revenue(), 102.375 + 0.21875);
}

// Properties.

TEST(ModelProperty, DeterministicIsRandomizedWithBetaOne)
{
  std::mt19937_64                        rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 1000; ++k)
  {
    auto const  v = random_density(rng);
    double const t = unit(rng);
    for (Agent const &a : {offender(v), defender(v)})
    {
      ASSERT_EQ(value_of_outcome(a, Deterministic{t}), value_of_outcome(a, Randomized{1.0, t}));
    }
  }
}

TEST(ModelProperty, MonotoneInBothParameters)
{
  std::mt19937_64 rng(22);
  for (int k = 0; k < 1000; ++k)
  {
    auto const  v   = random_density(rng);
    Agent const off = offender(v);
    Agent const def = defender(v);
    double      prev_off = -1.0;
    double      prev_def = 1e300;
    for (int g = 0; g <= 20; ++g)
    {
      double const b  = g / 20.0;
      double const vo = value_of_outcome(off, Randomized{0.6, b});
      double const vd = value_of_outcome(def, Randomized{0.6, b});
      ASSERT_GE(vo, prev_off - 1e-12);
      ASSERT_LE(vd, prev_def + 1e-12);
      prev_off = vo;
      prev_def = vd;
    }
    double const b2 = 0.37;
    ASSERT_LE(value_of_outcome(off, Randomized{0.2, b2}), value_of_outcome(off, Randomized{0.8, b2}));
    ASSERT_GE(value_of_outcome(def, Randomized{0.2, b2}), value_of_outcome(def, Randomized{0.8, b2}));
  }
}

TEST(ModelProperty, FullMassAndMirror)
{
  std::mt19937_64                        rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 1000; ++k)
  {
    auto const   v    = random_density(rng);
    double const mass = integrate(v, 0.0, 1.0);
    ASSERT_NEAR(value_of_outcome(offender(v), Deterministic{1.0}), mass, 1e-12);
    ASSERT_NEAR(value_of_outcome(defender(v), Deterministic{0.0}), mass, 1e-12);
    double const t = unit(rng);
    ASSERT_NEAR(value_of_outcome(offender(v), Deterministic{t}) +
                    value_of_outcome(defender(v), Deterministic{t}),
                mass, 1e-12);
  }
}

TEST(SplitBasis, SharesMatchDirectIntegrals)
{
  std::mt19937_64                        rng(24);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PiecewisePolynomial>       ws{random_density(rng), random_density(rng), random_density(rng)};
  SplitBasis const basis({Role::Offender, Role::Defender, Role::Offender}, ws);
  for (int k = 0; k < 200; ++k)
  {
    double const t = unit(rng);
    EXPECT_NEAR(basis.share(0, t), integrate(ws[0], 0.0, t), 1e-12);
    EXPECT_NEAR(basis.share(1, t), integrate(ws[1], t, 1.0), 1e-12);
    EXPECT_NEAR(basis.share(2, t), integrate(ws[2], 0.0, t), 1e-12);
  }
}

TEST(SplitBasis, MaximizeMatchesGrid)
{
  std::mt19937_64                        rng(25);
  std::uniform_real_distribution<double> w(-3.0, 3.0);
  std::vector<PiecewisePolynomial>       ws{random_density(rng), random_density(rng)};
  SplitBasis const basis({Role::Offender, Role::Defender}, ws);
  for (int k = 0; k < 50; ++k)
  {
    std::vector<double> const weights{w(rng), w(rng)};
    auto const                best = basis.maximize(weights);
    double                    grid = -1e300;
    for (int g = 0; g <= 20000; ++g)
    {
      double const t = g / 20000.0;
      grid = std::max(grid, weights[0] * basis.share(0, t) + weights[1] * basis.share(1, t));
    }
    ASSERT_GE(best.value, grid - 1e-12);
    ASSERT_LE(best.value, grid + 1e-3);  // kinks: h * sup|slope|
  }
}
