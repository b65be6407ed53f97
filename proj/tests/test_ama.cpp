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

#include "xmkt/ama.hpp"
#include "xmkt/errors.hpp"
#include "xmkt/scenario_io.hpp"
#include "xmkt/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace xmkt;

namespace {

PiecewisePolynomial const kOneMinusT({0.0, 1.0}, {{1.0, -1.0}});
PiecewisePolynomial const kOne = PiecewisePolynomial::constant(1.0);

Profile market(double theta1, double theta2)
{
  return Profile({offender(kOneMinusT, theta1), defender(kOne, theta2)});
}

AmaParams const kReferenceParams{{1.0, 13.0}, 31.0, OutcomeSpace::BetaFamily};

/// Closed-form objective for the two-agent market, independent of the engine.
double market_objective(double theta1, double theta2, double mu2, double zeta, double b1, double b2,
                        bool with1 = true, bool with2 = true)
{
  double const v1 = b1 * theta1 * (b2 - b2 * b2 / 2.0);
  double const v2 = theta2 - b1 * theta2 * b2;
  return (with1 ? v1 : 0.0) + (with2 ? mu2 * v2 : 0.0) + zeta * (1.0 - b1) * b2;
}

struct GridMax
{
  double b1;
  double b2;
  double value;
};

GridMax grid_max(double theta1, double theta2, double mu2, double zeta, bool with1, bool with2)
{
  GridMax best{0.0, 0.0, -1e300};
  for (int i = 0; i <= 2000; ++i)
  {
    for (int j = 0; j <= 2000; ++j)
    {
      double const b1 = i / 2000.0;
      double const b2 = j / 2000.0;
      double const v  = market_objective(theta1, theta2, mu2, zeta, b1, b2, with1, with2);
      if (v > best.value)
      {
        best = {b1, b2, v};
      }
    }
  }
  return best;
}

std::vector<AmaParams> random_params(std::size_t count, std::uint64_t seed)
{
  std::mt19937_64                        rng(seed);
  std::uniform_real_distribution<double> log_mu(0.0, std::log(50.0));
  std::uniform_real_distribution<double> zeta(0.0, 100.0);
  std::vector<AmaParams>                 out;
  for (std::size_t k = 0; k < count; ++k)
  {
    out.push_back({{1.0, std::exp(log_mu(rng))}, zeta(rng), OutcomeSpace::BetaFamily});
  }
  return out;
}

}  // namespace

TEST(AmaParams, Validation)
{
  EXPECT_NO_THROW(kReferenceParams.validate(2));
  EXPECT_THROW((AmaParams{{1.0}, 0.0, OutcomeSpace::Deterministic}.validate(2)), InvariantError);
  EXPECT_THROW((AmaParams{{2.0, 1.0}, 0.0, OutcomeSpace::Deterministic}.validate(2)), InvariantError);
  EXPECT_THROW((AmaParams{{1.0, 0.0}, 0.0, OutcomeSpace::Deterministic}.validate(2)), InvariantError);
  EXPECT_THROW((AmaParams{{1.0, 2.0}, -1.0, OutcomeSpace::BetaFamily}.validate(2)), InvariantError);
  EXPECT_THROW((AmaParams{{1.0, 2.0}, 5.0, OutcomeSpace::Deterministic}.validate(2)), InvariantError);
}

TEST(AmaObjective, Examples)
{
  auto const p = market(300.0, 10.0);
  EXPECT_NEAR(ama_objective(p, kReferenceParams, Randomized{1.0, 17.0 / 30.0}), 178.1666667, 1e-6);
  EXPECT_NEAR(ama_objective(p, kReferenceParams, Randomized{0.0, 1.0}), 161.0, 1e-12);

  auto const vcg = AmaParams::vcg(2);
  for (double t : {0.0, 0.3, 29.0 / 30.0, 1.0})
  {
    EXPECT_DOUBLE_EQ(ama_objective(p, vcg, Deterministic{t}),
                     total_welfare(p, Deterministic{t}, std::vector<double>{1.0, 1.0}));
  }
  EXPECT_THROW(ama_objective(p, vcg, Randomized{0.5, 0.5}), DomainError);
}

TEST(AmaOutcome, Examples)
{
  auto const p = market(300.0, 10.0);
  auto const det = std::get<Deterministic>(ama_outcome(p, AmaParams::vcg(2)));
  EXPECT_NEAR(det.t_end, 29.0 / 30.0, 1e-12);

  auto const beta = std::get<Randomized>(ama_outcome(p, kReferenceParams));
  EXPECT_EQ(beta.beta1, 1.0);
  EXPECT_NEAR(beta.beta2, 17.0 / 30.0, 1e-12);

  // Zero densities: a pure tie without a bonus; with zeta > 0 the bonus decides.
  AmaParams const flat{{1.0, 13.0}, 0.0, OutcomeSpace::BetaFamily};
  EXPECT_EQ(std::get<Randomized>(ama_outcome(market(0.0, 0.0), flat)), (Randomized{1.0, 0.0}));
  EXPECT_EQ(std::get<Randomized>(ama_outcome(market(0.0, 0.0), kReferenceParams)), (Randomized{0.0, 1.0}));
}

TEST(AmaOutcome, AgreesWithGridOracle)
{
  auto const grid = grid_max(300.0, 10.0, 13.0, 31.0, true, true);
  auto const beta = std::get<Randomized>(ama_outcome(market(300.0, 10.0), kReferenceParams));
  EXPECT_EQ(grid.b1, beta.beta1);
  EXPECT_NEAR(grid.b2, beta.beta2, 1e-3);
  EXPECT_NEAR(grid.value, ama_objective(market(300.0, 10.0), kReferenceParams, beta), 1e-4);

  // Reduced problems behind the payments.
  auto const without1 = grid_max(300.0, 10.0, 13.0, 31.0, false, true);
  auto const without2 = grid_max(300.0, 10.0, 13.0, 31.0, true, false);
  EXPECT_NEAR(without1.value, 161.0, 1e-9);
  EXPECT_EQ(without1.b1, 0.0);
  EXPECT_NEAR(without2.value, 150.0, 1e-9);
  EXPECT_EQ(without2.b1, 1.0);
  EXPECT_EQ(without2.b2, 1.0);
}

TEST(AmaPayment, Examples)
{
  auto const p = market(300.0, 10.0);
  EXPECT_NEAR(ama_payment(p, AmaParams::vcg(2), 0), 10.0 * (1.0 - 10.0 / 300.0), 1e-9);
  EXPECT_NEAR(ama_payment(p, AmaParams::vcg(2), 1), 100.0 / 600.0, 1e-9);
  EXPECT_NEAR(ama_payment(p, kReferenceParams, 0), 161.0 - 56.3333333333, 1e-6);
  EXPECT_NEAR(ama_payment(p, kReferenceParams, 1), (150.0 - 121.8333333333) / 13.0, 1e-6);

  auto const silent = market(300.0, 0.0);
  EXPECT_EQ(ama_payment(silent, kReferenceParams, 1), 0.0);
  EXPECT_THROW(ama_payment(p, kReferenceParams, 2), DomainError);
}

TEST(RunAma, ReferenceParams)
{
  auto const r = run_ama(market(300.0, 10.0), kReferenceParams);
  auto const a = std::get<Randomized>(r.outcome);
  EXPECT_EQ(a.beta1, 1.0);
  EXPECT_NEAR(a.beta2, 17.0 / 30.0, 1e-12);
  EXPECT_NEAR(r.payments[0], 104.6666667, 1e-6);
  EXPECT_NEAR(r.payments[1], 2.1666667, 1e-6);
  EXPECT_NEAR(r.utilities[0], 17.1666667, 1e-6);
  EXPECT_NEAR(r.utilities[1], 2.1666667, 1e-6);
}

TEST(RunVcg, Examples)
{
  auto const r = run_vcg(market(300.0, 10.0));
  EXPECT_NEAR(std::get<Deterministic>(r.outcome).t_end, 29.0 / 30.0, 1e-12);
  EXPECT_NEAR(r.revenue(), 9.8333333, 1e-6);

  auto const lone_offender = run_vcg(Profile({offender(kOneMinusT, 300.0)}));
  EXPECT_EQ(std::get<Deterministic>(lone_offender.outcome).t_end, 1.0);
  EXPECT_EQ(lone_offender.payments[0], 0.0);

  auto const lone_defender = run_vcg(Profile({defender(kOne, 10.0)}));
  EXPECT_EQ(std::get<Deterministic>(lone_defender.outcome).t_end, 0.0);
  EXPECT_EQ(lone_defender.payments[0], 0.0);
}

// Properties.

TEST(AmaProperty, UnitParamsAreVcgExactly)
{
  auto const scenario = bundled_scenario();
  for (std::uint64_t k = 0; k < 1000; ++k)
  {
    auto const p = sample_profile(scenario, k);
    ASSERT_EQ(run_ama(p, AmaParams::vcg(2)), run_vcg(p)) << "sample " << k;
  }
}

TEST(AmaProperty, ZetaZeroCollapsesToDeterministic)
{
  auto const      scenario = bundled_scenario();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> mu(1.0, 50.0);
  for (std::uint64_t k = 0; k < 1000; ++k)
  {
    auto const p  = sample_profile(scenario, k);
    double const m = mu(rng);
    auto const det  = run_ama(p, {{1.0, m}, 0.0, OutcomeSpace::Deterministic});
    auto       beta = run_ama(p, {{1.0, m}, 0.0, OutcomeSpace::BetaFamily});
    auto const a    = std::get<Randomized>(beta.outcome);
    ASSERT_EQ(a.beta1, 1.0) << "sample " << k;
    beta.outcome = Deterministic{a.beta2};
    ASSERT_EQ(det, beta) << "sample " << k;
  }
}

TEST(AmaProperty, ScalingWeightsAndZetaKeepsOutcome)
{
  auto const      scenario = bundled_scenario();
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> unit(0.1, 10.0);
  SplitBasis const basis(scenario.roles(), scenario.weights());
  AmaEngine const  engine(basis);
  for (auto const &params : random_params(20, 33))
  {
    double const c = unit(rng);
    std::vector<double> scaled{c * params.mu[0], c * params.mu[1]};
    for (std::uint64_t k = 0; k < 100; ++k)
    {
      auto const thetas = sample_thetas(scenario, k);
      auto const a      = engine.choose(thetas, params.mu, params.zeta, params.space).alpha;
      auto const b      = engine.choose(thetas, scaled, c * params.zeta, params.space).alpha;
      ASSERT_EQ(a.beta1, b.beta1);
      ASSERT_NEAR(a.beta2, b.beta2, 1e-9);
    }
  }
}

TEST(AmaProperty, PaymentsNonnegativeAndIndividuallyRational)
{
  auto const scenario = bundled_scenario();
  for (auto const &params : random_params(20, 34))
  {
    Evaluator const eval(scenario, MechanismSpec::ama(params));
    for (std::uint64_t k = 0; k < 200; ++k)
    {
      auto const r = eval.run(sample_profile(scenario, k));
      for (std::size_t i = 0; i < 2; ++i)
      {
        ASSERT_GE(r.payments[i], -1e-12);
        ASSERT_GE(r.utilities[i], -1e-9);
      }
    }
  }
}

TEST(AmaProperty, StrategyproofUnderRandomParams)
{
  auto const scenario = bundled_scenario();
  auto       params   = random_params(20, 35);
  params.push_back(kReferenceParams);
  for (auto const &p : params)
  {
    auto const spec = MechanismSpec::ama(p);
    ASSERT_TRUE(check_sp(scenario, spec, 100, 20, 1e-6).empty())
        << "mu2 " << p.mu[1] << " zeta " << p.zeta;
    ASSERT_TRUE(check_ir(scenario, spec, 100, 1e-9).empty());
  }
}

TEST(AmaProperty, GeneralModelDensities)
{
  // Defender density reshaped by hand: misreports drawn from other shapes
  // never beat the truth.
  PiecewisePolynomial const truth({0.0, 0.5, 1.0}, {{2.0, 4.0}, {8.0, -6.0}});
  Profile const             p({offender(kOneMinusT, 250.0), defender(truth)});
  auto const                honest = run_ama(p, kReferenceParams);
  std::mt19937_64           rng(36);
  std::uniform_real_distribution<double> u(0.0, 12.0);
  for (int k = 0; k < 500; ++k)
  {
    PiecewisePolynomial const lie({0.0, 0.3, 1.0}, {{u(rng), u(rng)}, {u(rng), 0.0}});
    auto const r     = run_ama(p.with_density(1, lie), kReferenceParams);
    double const got = value_of_outcome(p[1], r.outcome) - r.payments[1];
    ASSERT_LE(got, honest.utilities[1] + 1e-6) << "trial " << k;
  }
}
