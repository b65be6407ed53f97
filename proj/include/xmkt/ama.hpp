#pragma once
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

// Affine maximizer auctions over the time split, with VCG as the unit-weight
// special case. Outcomes live either on deterministic disclosure times or on
// the two-parameter family alpha(t) = beta1 on [0, beta2], with the outcome
// bonus lambda(alpha) = zeta (1 - beta1) beta2.

#include "xmkt/errors.hpp"
#include "xmkt/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace xmkt {

enum class OutcomeSpace
{
  Deterministic,
  BetaFamily
};

struct AmaParams
{
  std::vector<double> mu;
  double              zeta{0.0};
  OutcomeSpace        space{OutcomeSpace::Deterministic};

  /// Unit weights, no bonus, deterministic outcomes.
  static AmaParams vcg(std::size_t n)
  {
    return AmaParams{std::vector<double>(n, 1.0), 0.0, OutcomeSpace::Deterministic};
  }

  void validate(std::size_t n) const
  {
    if (mu.size() != n)
    {
      throw InvariantError("ama: expected " + std::to_string(n) + " weights, got " +
                           std::to_string(mu.size()));
    }
    for (double m : mu)
    {
      if (!(m > 0.0) || !std::isfinite(m))
      {
        throw InvariantError("ama: every mu must be a finite positive number");
      }
    }
    if (mu.front() != 1.0)
    {
      throw InvariantError("ama: mu of agent 1 is normalised to 1");
    }
    if (!(zeta >= 0.0) || !std::isfinite(zeta))
    {
      throw InvariantError("ama: zeta must be a finite nonnegative number");
    }
    if (space == OutcomeSpace::Deterministic && zeta != 0.0)
    {
      throw InvariantError("ama: zeta must be 0 on the deterministic outcome space");
    }
  }

  friend bool operator==(AmaParams const &, AmaParams const &) = default;
};

inline double bonus(double zeta, Randomized const &alpha)
{
  return zeta * (1.0 - alpha.beta1) * alpha.beta2;
}

/**
 * Exact affine-maximizer solver for one fixed set of weight curves.
 *
 * Per-agent densities are scales[i] * c_i, so a scenario whose agents share
 * fixed weight curves builds one engine and reuses it for every sampled
 * profile. Weights are not required to be normalised here.
 */
class AmaEngine
{
public:
  struct Choice
  {
    Randomized alpha;
    double     value{0.0};
  };

  explicit AmaEngine(SplitBasis basis)
    : basis_(std::move(basis))
  {}

  static AmaEngine of(Profile const &profile)
  {
    return AmaEngine(SplitBasis::of_weights(profile));
  }

  SplitBasis const &basis() const noexcept
  {
    return basis_;
  }

  /// Maximizer of sum_{j != skip} mu_j V_j(alpha) + lambda(alpha) over the space.
  Choice choose(std::span<double const> scales, std::span<double const> mu, double zeta,
                OutcomeSpace space, std::optional<std::size_t> skip = std::nullopt) const
  {
    std::size_t const   n = basis_.size();
    std::vector<double> w(n, 0.0);
    double              floor = 0.0;
    for (std::size_t j = 0; j < n; ++j)
    {
      if (skip && *skip == j)
      {
        continue;
      }
      w[j] = mu[j] * scales[j];
      if (basis_.role(j) == Role::Defender)
      {
        floor += w[j] * basis_.total(j);
      }
    }

    // The objective is affine in beta1 for fixed beta2, so only beta1 in {0, 1}
    // needs checking. beta1 = 1 is the deterministic problem.
    Maximum const alive = basis_.maximize(w, skip);
    Choice        best{Randomized{1.0, alive.t}, alive.value};
    if (space == OutcomeSpace::Deterministic)
    {
      return best;
    }

    // beta1 = 0: defenders keep everything, lambda = zeta * beta2.
    Choice const killed = zeta > 0.0 ? Choice{Randomized{0.0, 1.0}, floor + zeta}
                                     : Choice{Randomized{0.0, 0.0}, floor};
    if (killed.value > best.value + kTieTolerance)
    {
      best = killed;
    }
    return best;
  }

  /// sum_{j != skip} mu_j V_j(alpha) + lambda(alpha).
  double objective(std::span<double const> scales, std::span<double const> mu, double zeta,
                   Randomized const &alpha, std::optional<std::size_t> skip = std::nullopt) const
  {
    double total = bonus(zeta, alpha);
    for (std::size_t j = 0; j < basis_.size(); ++j)
    {
      if (skip && *skip == j)
      {
        continue;
      }
      double const alive = alpha.beta1 * basis_.cumulative(j, alpha.beta2);
      double const value =
          basis_.role(j) == Role::Offender ? alive : basis_.total(j) - alive;
      total += mu[j] * scales[j] * value;
    }
    return total;
  }

  /// (1/mu_i) (max reduced objective - reduced objective at alpha).
  double payment(std::span<double const> scales, std::span<double const> mu, double zeta,
                 OutcomeSpace space, Randomized const &alpha, std::size_t i) const
  {
    double const at_alpha = objective(scales, mu, zeta, alpha, i);
    double const reduced  = choose(scales, mu, zeta, space, i).value;
    // alpha itself is feasible for the reduced problem.
    return (std::max(reduced, at_alpha) - at_alpha) / mu[i];
  }

  struct Solution
  {
    Randomized          alpha;
    std::vector<double> payments;
  };

  Solution solve(std::span<double const> scales, std::span<double const> mu, double zeta,
                 OutcomeSpace space) const
  {
    Solution s;
    s.alpha = choose(scales, mu, zeta, space).alpha;
    s.payments.resize(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i)
    {
      s.payments[i] = payment(scales, mu, zeta, space, s.alpha, i);
    }
    return s;
  }

private:
  SplitBasis basis_;
};

namespace detail {

inline std::vector<double> density_scales(Profile const &profile)
{
  std::vector<double> scales(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i)
  {
    scales[i] = profile[i].density_scale();
  }
  return scales;
}

inline Outcome as_outcome(Randomized const &alpha, OutcomeSpace space)
{
  if (space == OutcomeSpace::Deterministic)
  {
    return Deterministic{alpha.beta2};
  }
  return alpha;
}

}  // namespace detail

inline double ama_objective(Profile const &profile, AmaParams const &params,
                            Outcome const &outcome)
{
  params.validate(profile.size());
  Randomized const alpha = survival(outcome);
  if (params.space == OutcomeSpace::Deterministic && alpha.beta1 != 1.0)
  {
    throw DomainError("ama_objective: randomized outcome outside the deterministic space");
  }
  return total_welfare(profile, outcome, params.mu) + bonus(params.zeta, alpha);
}

inline Outcome ama_outcome(Profile const &profile, AmaParams const &params)
{
  params.validate(profile.size());
  auto const engine = AmaEngine::of(profile);
  auto const scales = detail::density_scales(profile);
  return detail::as_outcome(engine.choose(scales, params.mu, params.zeta, params.space).alpha,
                            params.space);
}

inline double ama_payment(Profile const &profile, AmaParams const &params, std::size_t i)
{
  params.validate(profile.size());
  if (i >= profile.size())
  {
    throw DomainError("ama_payment: no agent " + std::to_string(i + 1));
  }
  auto const engine = AmaEngine::of(profile);
  auto const scales = detail::density_scales(profile);
  auto const alpha  = engine.choose(scales, params.mu, params.zeta, params.space).alpha;
  return engine.payment(scales, params.mu, params.zeta, params.space, alpha, i);
}

inline MechanismResult run_ama(Profile const &profile, AmaParams const &params)
{
  params.validate(profile.size());
  auto const engine   = AmaEngine::of(profile);
  auto const scales   = detail::density_scales(profile);
  auto       solution = engine.solve(scales, params.mu, params.zeta, params.space);
  return make_result(profile, detail::as_outcome(solution.alpha, params.space),
                     std::move(solution.payments));
}

inline MechanismResult run_vcg(Profile const &profile)
{
  return run_ama(profile, AmaParams::vcg(profile.size()));
}

}  // namespace xmkt
