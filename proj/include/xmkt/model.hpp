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

#include "xmkt/distribution.hpp"
#include "xmkt/errors.hpp"
#include "xmkt/piecewise.hpp"
#include "xmkt/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace xmkt {

enum class Role
{
  Offender,
  Defender
};

inline std::string_view to_string(Role role)
{
  return role == Role::Offender ? "offender" : "defender";
}

/**
 * One buyer.
 *
 * Single-parameter agents carry a theta; their density is theta * weight.
 * General-model agents carry neither theta nor distribution and their weight
 * is the density itself. An agent with a distribution but no theta is a
 * template waiting to be sampled and has no density yet.
 */
struct Agent
{
  Role                        role{Role::Offender};
  PiecewisePolynomial         weight;
  std::optional<double>       theta;
  std::optional<Distribution> distribution;

  bool resolved() const noexcept
  {
    return theta.has_value() || !distribution.has_value();
  }

  bool single_parameter() const noexcept
  {
    return theta.has_value();
  }

  /// Factor between the weight and the realized density.
  double density_scale() const
  {
    if (!resolved())
    {
      throw ModelError("agent has a prior but no realized theta");
    }
    return theta.value_or(1.0);
  }

  PiecewisePolynomial density() const
  {
    if (!resolved())
    {
      throw ModelError("agent has a prior but no realized theta");
    }
    return theta ? scale(weight, *theta) : weight;
  }
};

inline Agent offender(PiecewisePolynomial weight, std::optional<double> theta = std::nullopt,
                      std::optional<Distribution> distribution = std::nullopt)
{
  return Agent{Role::Offender, std::move(weight), theta, std::move(distribution)};
}

inline Agent defender(PiecewisePolynomial weight, std::optional<double> theta = std::nullopt,
                      std::optional<Distribution> distribution = std::nullopt)
{
  return Agent{Role::Defender, std::move(weight), theta, std::move(distribution)};
}

/// A fully realized type profile. Index k is agent k+1 in reports.
class Profile
{
public:
  explicit Profile(std::vector<Agent> agents)
    : agents_(std::move(agents))
  {
    if (agents_.empty())
    {
      throw InvariantError("profile: at least one agent is required");
    }
    for (std::size_t i = 0; i < agents_.size(); ++i)
    {
      if (!agents_[i].resolved())
      {
        throw ModelError("profile: agent " + std::to_string(i + 1) + " has no realized theta");
      }
      if (agents_[i].theta && !(*agents_[i].theta >= 0.0 && std::isfinite(*agents_[i].theta)))
      {
        throw InvariantError("profile: agent " + std::to_string(i + 1) + " theta must be >= 0");
      }
    }
  }

  std::size_t size() const noexcept
  {
    return agents_.size();
  }

  Agent const &operator[](std::size_t i) const
  {
    return agents_.at(i);
  }

  std::vector<Agent> const &agents() const noexcept
  {
    return agents_;
  }

  /// Copy with agent i reporting `theta` instead.
  Profile with_theta(std::size_t i, double theta) const
  {
    std::vector<Agent> copy(agents_);
    copy.at(i).theta = theta;
    return Profile(std::move(copy));
  }

  /// Copy with agent i reporting a different density (general model).
  Profile with_density(std::size_t i, PiecewisePolynomial density) const
  {
    std::vector<Agent> copy(agents_);
    copy.at(i).weight = std::move(density);
    copy.at(i).theta.reset();
    copy.at(i).distribution.reset();
    return Profile(std::move(copy));
  }

private:
  std::vector<Agent> agents_;
};

struct Deterministic
{
  double t_end{0.0};

  friend bool operator==(Deterministic const &, Deterministic const &) = default;
};

/// alpha(t) = beta1 on [0, beta2], 0 afterwards.
struct Randomized
{
  double beta1{1.0};
  double beta2{0.0};

  friend bool operator==(Randomized const &, Randomized const &) = default;
};

using Outcome = std::variant<Deterministic, Randomized>;

/// The (beta1, beta2) pair behind any outcome; Deterministic(t) is (1, t).
inline Randomized survival(Outcome const &outcome)
{
  Randomized const r = std::holds_alternative<Deterministic>(outcome)
                           ? Randomized{1.0, std::get<Deterministic>(outcome).t_end}
                           : std::get<Randomized>(outcome);
  if (!(r.beta1 >= 0.0 && r.beta1 <= 1.0 && r.beta2 >= 0.0 && r.beta2 <= 1.0))
  {
    throw DomainError("outcome parameters must lie in [0,1]");
  }
  return r;
}

struct MechanismResult
{
  Outcome             outcome{Deterministic{0.0}};
  std::vector<double> payments;
  std::vector<double> valuations;
  std::vector<double> utilities;

  double revenue() const
  {
    return std::accumulate(payments.begin(), payments.end(), 0.0);
  }

  friend bool operator==(MechanismResult const &, MechanismResult const &) = default;
};

/// Offender: beta1 * int_0^beta2 v. Defender: int_0^1 v - beta1 * int_0^beta2 v.
inline double value_of_outcome(Agent const &agent, Outcome const &outcome)
{
  double const     k     = agent.density_scale();
  Randomized const alpha = survival(outcome);
  double const     alive = alpha.beta1 * (k * integrate(agent.weight, 0.0, alpha.beta2));
  if (agent.role == Role::Offender)
  {
    return alive;
  }
  return k * integrate(agent.weight, 0.0, 1.0) - alive;
}

inline double total_welfare(Profile const &profile, Outcome const &outcome,
                            std::span<double const> weights)
{
  if (weights.size() != profile.size())
  {
    throw DomainError("total_welfare: one weight per agent required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i)
  {
    if (!(weights[i] > 0.0))
    {
      throw DomainError("total_welfare: weights must be > 0");
    }
    total += weights[i] * value_of_outcome(profile[i], outcome);
  }
  return total;
}

inline MechanismResult make_result(Profile const &profile, Outcome outcome,
                                   std::vector<double> payments)
{
  MechanismResult result;
  result.outcome  = outcome;
  result.payments = std::move(payments);
  result.valuations.resize(profile.size());
  result.utilities.resize(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i)
  {
    result.valuations[i] = value_of_outcome(profile[i], outcome);
    result.utilities[i]  = result.valuations[i] - result.payments[i];
  }
  return result;
}

/**
 * The per-agent "shares" of a split at time t, for a fixed set of weight
 * curves c_i: int_0^t c_i for offenders and int_t^1 c_i for defenders.
 *
 * All curves are refined onto one set of breakpoints so that any weighted
 * sum of shares is a single polynomial per piece. Both the revenue-optimal
 * rule (weights = virtual values) and the affine maximizers (weights =
 * mu_i * theta_i) reduce to maximizing such a sum.
 */
class SplitBasis
{
public:
  SplitBasis() = default;

  SplitBasis(std::vector<Role> roles, std::vector<PiecewisePolynomial> const &weights)
    : roles_(std::move(roles))
  {
    if (roles_.size() != weights.size() || roles_.empty())
    {
      throw InvariantError("split basis: one role per weight curve, at least one agent");
    }
    std::vector<double> grid{0.0, 1.0};
    for (auto const &w : weights)
    {
      grid.insert(grid.end(), w.breakpoints().begin(), w.breakpoints().end());
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    breakpoints_ = grid;

    std::size_t const pieces = grid.size() - 1;
    std::size_t const n      = roles_.size();
    cumulative_.reserve(n);
    totals_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      cumulative_.push_back(weights[i].curve().cumulative().refined(grid));
      totals_[i] = integrate(weights[i], 0.0, 1.0);
      for (auto const &piece : cumulative_.back().pieces())
      {
        width_ = std::max(width_, piece.size());
      }
    }

    // shares_[k][i] holds agent i's share polynomial on piece k, padded to width_.
    shares_.assign(pieces * n * width_, 0.0);
    for (std::size_t k = 0; k < pieces; ++k)
    {
      for (std::size_t i = 0; i < n; ++i)
      {
        auto const &cum  = cumulative_[i].pieces()[k];
        double     *dest = &shares_[(k * n + i) * width_];
        for (std::size_t j = 0; j < cum.size(); ++j)
        {
          dest[j] = roles_[i] == Role::Offender ? cum[j] : -cum[j];
        }
        if (roles_[i] == Role::Defender)
        {
          dest[0] += totals_[i];
        }
      }
    }
  }

  static SplitBasis of_weights(Profile const &profile)
  {
    std::vector<Role>                roles;
    std::vector<PiecewisePolynomial> curves;
    for (auto const &agent : profile.agents())
    {
      roles.push_back(agent.role);
      curves.push_back(agent.weight);
    }
    return SplitBasis(std::move(roles), curves);
  }

  std::size_t size() const noexcept
  {
    return roles_.size();
  }

  Role role(std::size_t i) const
  {
    return roles_.at(i);
  }

  /// int_0^1 c_i.
  double total(std::size_t i) const
  {
    return totals_.at(i);
  }

  /// int_0^t c_i.
  double cumulative(std::size_t i, double t) const
  {
    return cumulative_.at(i)(t);
  }

  /// Agent i's share of the split at t.
  double share(std::size_t i, double t) const
  {
    double const c = cumulative(i, t);
    return roles_.at(i) == Role::Offender ? c : totals_[i] - c;
  }

  /// max over t in [0,1] of sum_i weights[i] * share_i(t), skipping agent `skip`.
  Maximum maximize(std::span<double const> weights,
                   std::optional<std::size_t> skip = std::nullopt) const
  {
    std::size_t const n      = roles_.size();
    std::size_t const pieces = breakpoints_.size() - 1;

    std::array<double, 8> small{};
    std::vector<double>   large;
    std::span<double>     buffer;
    if (width_ <= small.size())
    {
      buffer = std::span<double>(small.data(), width_);
    }
    else
    {
      large.resize(width_);
      buffer = large;
    }

    Maximum best{};
    for (std::size_t k = 0; k < pieces; ++k)
    {
      std::fill(buffer.begin(), buffer.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i)
      {
        if ((skip && *skip == i) || weights[i] == 0.0)
        {
          continue;
        }
        double const *src = &shares_[(k * n + i) * width_];
        for (std::size_t j = 0; j < width_; ++j)
        {
          buffer[j] += weights[i] * src[j];
        }
      }
      Maximum const m = argmax_polynomial(buffer, breakpoints_[k], breakpoints_[k + 1]);
      if (k == 0 || m.value > best.value + kTieTolerance)
      {
        best = m;
      }
      else if (m.value > best.value)
      {
        best.value = m.value;
      }
    }
    return best;
  }

private:
  std::vector<Role>      roles_;
  std::vector<double>    breakpoints_{0.0, 1.0};
  std::vector<Piecewise> cumulative_;
  std::vector<double>    totals_;
  std::vector<double>    shares_;
  std::size_t            width_{1};
};

}  // namespace xmkt
