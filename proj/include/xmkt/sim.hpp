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

// Monte Carlo revenue estimation, the incentive-property harness and the
// (mu, zeta) tuner.

#include "xmkt/ama.hpp"
#include "xmkt/distribution.hpp"
#include "xmkt/errors.hpp"
#include "xmkt/model.hpp"
#include "xmkt/myerson.hpp"
#include "xmkt/nelder_mead.hpp"
#include "xmkt/piecewise.hpp"
#include "xmkt/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace xmkt {

struct AgentTemplate
{
  Role                  role{Role::Offender};
  PiecewisePolynomial   weight;
  Distribution          distribution{Distribution::uniform(0.0, 1.0)};
  std::optional<double> theta;
};

/// A market instance: agent templates plus the default seed and sample count.
struct Scenario
{
  std::vector<AgentTemplate> agents;
  std::uint64_t              seed{42};
  std::size_t                samples{100000};

  std::size_t size() const noexcept
  {
    return agents.size();
  }

  void validate() const
  {
    if (agents.empty())
    {
      throw InvariantError("scenario: at least one agent is required");
    }
    for (std::size_t i = 0; i < agents.size(); ++i)
    {
      auto const &a = agents[i];
      if (a.theta && !(*a.theta >= a.distribution.lower() && *a.theta <= a.distribution.upper()))
      {
        throw InvariantError("scenario: agent " + std::to_string(i + 1) +
                             " fixed theta lies outside its distribution support");
      }
    }
  }

  std::vector<Role> roles() const
  {
    std::vector<Role> out;
    for (auto const &a : agents)
    {
      out.push_back(a.role);
    }
    return out;
  }

  std::vector<PiecewisePolynomial> weights() const
  {
    std::vector<PiecewisePolynomial> out;
    for (auto const &a : agents)
    {
      out.push_back(a.weight);
    }
    return out;
  }

  /// The fixed thetas stored in the scenario, if every agent has one.
  std::optional<std::vector<double>> fixed_thetas() const
  {
    std::vector<double> out;
    for (auto const &a : agents)
    {
      if (!a.theta)
      {
        return std::nullopt;
      }
      out.push_back(*a.theta);
    }
    return out;
  }

  Profile profile(std::span<double const> thetas) const
  {
    if (thetas.size() != agents.size())
    {
      throw DomainError("scenario: expected " + std::to_string(agents.size()) + " thetas, got " +
                        std::to_string(thetas.size()));
    }
    std::vector<Agent> out;
    for (std::size_t i = 0; i < agents.size(); ++i)
    {
      out.push_back(Agent{agents[i].role, agents[i].weight, thetas[i], agents[i].distribution});
    }
    return Profile(std::move(out));
  }
};

inline std::vector<double> sample_thetas(Scenario const &scenario, std::uint64_t k,
                                         std::uint64_t seed)
{
  std::vector<double> thetas(scenario.size());
  for (std::size_t i = 0; i < scenario.size(); ++i)
  {
    thetas[i] = scenario.agents[i].distribution.quantile(stream_uniform(seed, k, i));
  }
  return thetas;
}

inline std::vector<double> sample_thetas(Scenario const &scenario, std::uint64_t k)
{
  return sample_thetas(scenario, k, scenario.seed);
}

/// Inverse-cdf draw of every theta, keyed by (seed, k, agent).
inline Profile sample_profile(Scenario const &scenario, std::uint64_t k)
{
  return scenario.profile(sample_thetas(scenario, k));
}

enum class MechanismKind
{
  Myerson,
  Vcg,
  Ama,
  /// Test double: VCG outcome, every agent pays her reported value.
  BrokenPayBid,
  /// Test double: VCG plus a flat fee per agent.
  BrokenFlatFee
};

struct MechanismSpec
{
  MechanismKind kind{MechanismKind::Myerson};
  AmaParams     params;
  double        fee{0.0};

  static MechanismSpec myerson()
  {
    return {MechanismKind::Myerson, {}, 0.0};
  }

  static MechanismSpec vcg()
  {
    return {MechanismKind::Vcg, {}, 0.0};
  }

  static MechanismSpec ama(AmaParams params)
  {
    return {MechanismKind::Ama, std::move(params), 0.0};
  }

  static MechanismSpec broken_pay_bid()
  {
    return {MechanismKind::BrokenPayBid, {}, 0.0};
  }

  static MechanismSpec broken_flat_fee(double fee)
  {
    return {MechanismKind::BrokenFlatFee, {}, fee};
  }

  std::string tag() const
  {
    switch (kind)
    {
    case MechanismKind::Myerson:
      return "myerson";
    case MechanismKind::Vcg:
      return "vcg";
    case MechanismKind::Ama:
      return "ama";
    case MechanismKind::BrokenPayBid:
      return "broken-paybid";
    case MechanismKind::BrokenFlatFee:
      return "broken-flatfee";
    }
    return "unknown";
  }

  /// Whether misreports may reshape the whole density rather than only theta.
  bool general_model() const noexcept
  {
    return kind != MechanismKind::Myerson;
  }
};

/**
 * A mechanism bound to a scenario's weight curves and priors.
 *
 * Everything that depends only on the scenario (split basis, priors, hazard
 * rate checks) is prepared once; per-profile queries take the theta vector.
 */
class Evaluator
{
public:
  struct Solution
  {
    Randomized          alpha;
    std::vector<double> payments;
  };

  Evaluator(Scenario const &scenario, MechanismSpec spec)
    : spec_(std::move(spec))
    , ama_(SplitBasis(scenario.roles(), scenario.weights()))
  {
    scenario.validate();
    std::size_t const n = scenario.size();
    if (spec_.kind == MechanismKind::Myerson)
    {
      std::vector<Distribution> priors;
      for (auto const &a : scenario.agents)
      {
        priors.push_back(a.distribution);
      }
      myerson_.emplace(ama_.basis(), std::move(priors));
    }
    else if (spec_.kind == MechanismKind::Ama)
    {
      spec_.params.validate(n);
    }
    else
    {
      spec_.params = AmaParams::vcg(n);
    }
  }

  MechanismSpec const &spec() const noexcept
  {
    return spec_;
  }

  SplitBasis const &basis() const noexcept
  {
    return ama_.basis();
  }

  OutcomeSpace space() const noexcept
  {
    return spec_.kind == MechanismKind::Myerson ? OutcomeSpace::Deterministic
                                                : spec_.params.space;
  }

  /// The chosen outcome only, without payments.
  Randomized choose(std::span<double const> thetas) const
  {
    if (myerson_)
    {
      return Randomized{1.0, myerson_->allocate(thetas).t_end};
    }
    auto const &p = spec_.params;
    return ama_.choose(thetas, p.mu, p.zeta, p.space).alpha;
  }

  Solution solve(std::span<double const> thetas) const
  {
    auto const &p = spec_.params;
    switch (spec_.kind)
    {
    case MechanismKind::Myerson:
      return {choose(thetas), myerson_->payments(thetas)};
    case MechanismKind::Vcg:
    case MechanismKind::Ama:
    {
      auto s = ama_.solve(thetas, p.mu, p.zeta, p.space);
      return {s.alpha, std::move(s.payments)};
    }
    case MechanismKind::BrokenPayBid:
    {
      Solution s{choose(thetas), std::vector<double>(thetas.size())};
      for (std::size_t i = 0; i < thetas.size(); ++i)
      {
        s.payments[i] = value(i, thetas[i], s.alpha);
      }
      return s;
    }
    case MechanismKind::BrokenFlatFee:
    {
      auto s = ama_.solve(thetas, p.mu, p.zeta, p.space);
      for (double &pay : s.payments)
      {
        pay += spec_.fee;
      }
      return {s.alpha, std::move(s.payments)};
    }
    }
    throw ModelError("unknown mechanism");
  }

  /// x_i(alpha): the agent's weight integrated over the region she values.
  double share(std::size_t i, Randomized const &alpha) const
  {
    auto const  &b     = ama_.basis();
    double const alive = alpha.beta1 * b.cumulative(i, alpha.beta2);
    return b.role(i) == Role::Offender ? alive : b.total(i) - alive;
  }

  /// Value of agent i with true type theta for outcome alpha.
  double value(std::size_t i, double theta, Randomized const &alpha) const
  {
    return theta * share(i, alpha);
  }

  Outcome outcome(Randomized const &alpha) const
  {
    return detail::as_outcome(alpha, space());
  }

  /// Generic path on an arbitrary profile (used for density misreports).
  MechanismResult run(Profile const &profile) const
  {
    switch (spec_.kind)
    {
    case MechanismKind::Myerson:
      return run_myerson(profile);
    case MechanismKind::Vcg:
    case MechanismKind::Ama:
      return run_ama(profile, spec_.params);
    case MechanismKind::BrokenPayBid:
    {
      auto result = run_vcg(profile);
      result      = make_result(profile, result.outcome, result.valuations);
      return result;
    }
    case MechanismKind::BrokenFlatFee:
    {
      auto result = run_vcg(profile);
      for (double &pay : result.payments)
      {
        pay += spec_.fee;
      }
      return make_result(profile, result.outcome, result.payments);
    }
    }
    throw ModelError("unknown mechanism");
  }

private:
  MechanismSpec                spec_;
  AmaEngine                    ama_;
  std::optional<MyersonEngine> myerson_;
};

/// Neumaier-compensated running sum.
class CompensatedSum
{
public:
  void add(double x) noexcept
  {
    double const t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
    {
      carry_ += (sum_ - t) + x;
    }
    else
    {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept
  {
    return sum_ + carry_;
  }

private:
  double sum_{0.0};
  double carry_{0.0};
};

struct SampleMoments
{
  double      mean{0.0};
  double      std_error{0.0};
  std::size_t n{0};
};

namespace detail {

inline constexpr std::size_t kChunk = 1024;

inline unsigned resolve_workers(unsigned workers)
{
  if (workers == 0)
  {
    workers = std::max(1U, std::thread::hardware_concurrency());
  }
  return workers;
}

}  // namespace detail

/**
 * Mean and standard error of fn(0), ..., fn(n-1).
 *
 * Samples are grouped into fixed chunks; each chunk is summed with
 * compensation and chunk totals are folded in chunk order, so the result is
 * bitwise identical for any worker count. An exception from sample k is
 * rethrown for the smallest failing k.
 */
template <typename Fn>
SampleMoments sample_moments(std::size_t n, Fn &&fn, unsigned workers = 0)
{
  if (n < 2)
  {
    throw DomainError("sample count must be >= 2");
  }
  std::size_t const chunks = (n + detail::kChunk - 1) / detail::kChunk;
  std::vector<CompensatedSum> sums(chunks);
  std::vector<CompensatedSum> squares(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::size_t>        failed_at(chunks, n);

  std::atomic<std::size_t> next{0};
  auto const               work = [&] {
    for (std::size_t c = next++; c < chunks; c = next++)
    {
      std::size_t const end = std::min(n, (c + 1) * detail::kChunk);
      for (std::size_t k = c * detail::kChunk; k < end; ++k)
      {
        try
        {
          double const v = fn(k);
          sums[c].add(v);
          squares[c].add(v * v);
        }
        catch (...)
        {
          errors[c]    = std::current_exception();
          failed_at[c] = k;
          break;
        }
      }
    }
  };

  auto const count = static_cast<unsigned>(std::min<std::size_t>(detail::resolve_workers(workers), chunks));
  if (count <= 1)
  {
    work();
  }
  else
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < count; ++w)
    {
      pool.emplace_back(work);
    }
  }

  CompensatedSum sum;
  CompensatedSum square;
  for (std::size_t c = 0; c < chunks; ++c)
  {
    if (errors[c])
    {
      try
      {
        std::rethrow_exception(errors[c]);
      }
      catch (PreconditionError const &e)
      {
        throw PreconditionError("sample " + std::to_string(failed_at[c]) + ": " + e.what());
      }
      catch (ModelError const &e)
      {
        throw ModelError("sample " + std::to_string(failed_at[c]) + ": " + e.what());
      }
      catch (DistributionError const &e)
      {
        throw DistributionError("sample " + std::to_string(failed_at[c]) + ": " + e.what());
      }
    }
    sum.add(sums[c].value());
    square.add(squares[c].value());
  }

  double const nn       = static_cast<double>(n);
  double const mean     = sum.value() / nn;
  double const variance = std::max(0.0, (square.value() - nn * mean * mean) / (nn - 1.0));
  return {mean, std::sqrt(variance / nn), n};
}

struct RevenueEstimate
{
  double        mean{0.0};
  double        std_error{0.0};
  std::size_t   n{0};
  MechanismSpec mechanism;
  std::uint64_t seed{0};
};

/// Mean total payment over n profiles sampled from the scenario's seed.
inline RevenueEstimate estimate_revenue(Scenario const &scenario, MechanismSpec const &mechanism,
                                        std::size_t n, unsigned workers = 0)
{
  Evaluator const evaluator(scenario, mechanism);
  auto const      moments = sample_moments(
      n,
      [&](std::size_t k) {
        auto const thetas   = sample_thetas(scenario, k);
        auto const solution = evaluator.solve(thetas);
        double     total    = 0.0;
        for (double p : solution.payments)
        {
          total += p;
        }
        return total;
      },
      workers);
  return {moments.mean, moments.std_error, moments.n, evaluator.spec(), scenario.seed};
}

struct Violation
{
  std::size_t   sample{0};
  std::size_t   agent{0};  // 1-based
  std::string   deviation;
  double        truthful_utility{0.0};
  double        deviation_utility{0.0};
  std::uint64_t seed{0};
};

namespace detail {

inline constexpr std::uint64_t kMisreportStream = 0x5350;  // "SP"
inline constexpr std::uint64_t kFixingStream    = 0x4D4F;  // "MO"

/// v = theta c, multiplied on three random stretches by factors in [1/4, 2].
inline PiecewisePolynomial perturbed_density(PiecewisePolynomial const &weight, double theta,
                                             std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> cut(0.05, 0.95);
  std::uniform_real_distribution<double> factor(0.25, 2.0);
  double a = cut(rng);
  double b = cut(rng);
  if (a > b)
  {
    std::swap(a, b);
  }
  double const cuts[2] = {a, b};
  Piecewise    curve   = weight.curve().scaled(theta).refined(cuts);
  double const f[3]    = {factor(rng), factor(rng), factor(rng)};

  std::vector<Coefficients> pieces(curve.pieces());
  for (std::size_t k = 0; k < pieces.size(); ++k)
  {
    double const mid  = 0.5 * (curve.breakpoints()[k] + curve.breakpoints()[k + 1]);
    double const mult = mid < a ? f[0] : (mid < b ? f[1] : f[2]);
    for (double &c : pieces[k])
    {
      c *= mult;
    }
  }
  return PiecewisePolynomial(Piecewise(curve.breakpoints(), std::move(pieces)));
}

}  // namespace detail

/**
 * Audits strategy-proofness on sampled profiles.
 *
 * Misreports per agent: the two support endpoints, then log-uniform rescalings
 * of theta in [1/4, 4] clipped to the support. Mechanisms defined on general
 * densities also get random piecewise reshapings of the density on every
 * other draw. A violation is a misreport whose utility beats the truthful
 * utility by more than eps.
 */
inline std::vector<Violation> check_sp(Scenario const &scenario, MechanismSpec const &mechanism,
                                       std::size_t n_profiles, std::size_t n_deviations,
                                       double eps)
{
  if (!(eps > 0.0))
  {
    throw DomainError("check_sp: eps must be > 0");
  }
  Evaluator const        evaluator(scenario, mechanism);
  std::vector<Violation> out;
  std::uniform_real_distribution<double> log_factor(std::log(0.25), std::log(4.0));

  for (std::size_t k = 0; k < n_profiles; ++k)
  {
    auto const thetas = sample_thetas(scenario, k);
    auto const truth  = evaluator.solve(thetas);
    std::optional<Profile> profile;

    for (std::size_t i = 0; i < scenario.size(); ++i)
    {
      auto const  &prior    = scenario.agents[i].distribution;
      double const truthful = evaluator.value(i, thetas[i], truth.alpha) - truth.payments[i];
      auto         rng      = keyed_engine(scenario.seed, k, i, detail::kMisreportStream);

      for (std::size_t d = 0; d < n_deviations; ++d)
      {
        std::string label;
        double      utility = 0.0;
        if (d >= 2 && mechanism.general_model() && d % 2 == 1)
        {
          if (!profile)
          {
            profile = scenario.profile(thetas);
          }
          auto const lie    = detail::perturbed_density(scenario.agents[i].weight, thetas[i], rng);
          auto const result = evaluator.run(profile->with_density(i, lie));
          utility = value_of_outcome((*profile)[i], result.outcome) - result.payments[i];
          label   = "density reshaping #" + std::to_string(d);
        }
        else
        {
          double report = 0.0;
          if (d == 0)
          {
            report = prior.lower();
          }
          else if (d == 1)
          {
            report = prior.upper();
          }
          else
          {
            report = std::clamp(thetas[i] * std::exp(log_factor(rng)), prior.lower(),
                                prior.upper());
          }
          std::vector<double> lie(thetas);
          lie[i]                = report;
          auto const solution = evaluator.solve(lie);
          utility = evaluator.value(i, thetas[i], solution.alpha) - solution.payments[i];
          label   = "theta " + std::to_string(thetas[i]) + " -> " + std::to_string(report);
        }
        if (utility > truthful + eps)
        {
          out.push_back({k, i + 1, label, truthful, utility, scenario.seed});
        }
      }
    }
  }
  return out;
}

/// Truthful utilities below -eps on sampled profiles.
inline std::vector<Violation> check_ir(Scenario const &scenario, MechanismSpec const &mechanism,
                                       std::size_t n_profiles, double eps)
{
  if (!(eps > 0.0))
  {
    throw DomainError("check_ir: eps must be > 0");
  }
  Evaluator const        evaluator(scenario, mechanism);
  std::vector<Violation> out;
  for (std::size_t k = 0; k < n_profiles; ++k)
  {
    auto const thetas = sample_thetas(scenario, k);
    auto const truth  = evaluator.solve(thetas);
    for (std::size_t i = 0; i < scenario.size(); ++i)
    {
      double const u = evaluator.value(i, thetas[i], truth.alpha) - truth.payments[i];
      if (u < -eps)
      {
        out.push_back({k, i + 1, "truthful", u, u, scenario.seed});
      }
    }
  }
  return out;
}

struct MonotoneViolation
{
  std::size_t fixing{0};
  double      theta_lo{0.0};
  double      theta_hi{0.0};
  double      share_lo{0.0};
  double      share_hi{0.0};
};

struct MonotoneReport
{
  bool                             pass{true};
  std::optional<MonotoneViolation> violation;
};

/**
 * Sweeps agent i's report over a uniform grid on its support, with the other
 * reports fixed at `fixings` random draws, and fails on any drop of x_i
 * larger than 1e-9.
 */
inline MonotoneReport check_monotone_allocation(Scenario const      &scenario,
                                                MechanismSpec const &mechanism, std::size_t agent,
                                                std::size_t grid, std::size_t fixings = 50)
{
  if (agent >= scenario.size())
  {
    throw DomainError("check_monotone_allocation: no agent " + std::to_string(agent + 1));
  }
  if (grid < 2)
  {
    throw DomainError("check_monotone_allocation: grid must be >= 2");
  }
  Evaluator const evaluator(scenario, mechanism);
  auto const     &prior = scenario.agents[agent].distribution;
  double const    step  = (prior.upper() - prior.lower()) / static_cast<double>(grid - 1);

  for (std::size_t f = 0; f < fixings; ++f)
  {
    auto   thetas = sample_thetas(scenario, f, scenario.seed ^ mix64(detail::kFixingStream));
    double prev   = -std::numeric_limits<double>::infinity();
    double prev_z = prior.lower();
    for (std::size_t g = 0; g < grid; ++g)
    {
      double const z = g + 1 == grid ? prior.upper() : prior.lower() + step * static_cast<double>(g);
      thetas[agent]  = z;
      double const x = evaluator.share(agent, evaluator.choose(thetas));
      if (x < prev - 1e-9)
      {
        return {false, MonotoneViolation{f, prev_z, z, prev, x}};
      }
      prev   = x;
      prev_z = z;
    }
  }
  return {true, std::nullopt};
}

struct TuneOptions
{
  double        mu_lo{1.0};
  double        mu_hi{50.0};
  double        zeta_lo{0.0};
  double        zeta_hi{100.0};
  std::size_t   grid{21};
  std::size_t   samples{20000};
  std::uint64_t seed{42};
  unsigned      workers{0};
};

struct TuneResult
{
  AmaParams       params;
  RevenueEstimate estimate;
  std::size_t     evaluations{0};
};

/**
 * Searches AMA parameters (mu_2..mu_n, zeta) for the highest estimated revenue.
 *
 * Every candidate is scored on the same bank of sampled profiles. A coarse
 * grid picks the start, Nelder-Mead refines it inside the box, and the best
 * candidate seen anywhere is returned. Degenerate ranges (lo == hi) pin that
 * coordinate. The outcome space is the beta family unless zeta is pinned to 0.
 */
inline TuneResult tune(Scenario const &scenario, TuneOptions const &opt)
{
  if (opt.mu_lo > opt.mu_hi || opt.zeta_lo > opt.zeta_hi)
  {
    throw DomainError("tune: empty parameter range");
  }
  if (!(opt.mu_lo > 0.0) || !(opt.zeta_lo >= 0.0))
  {
    throw DomainError("tune: mu must be > 0 and zeta >= 0");
  }
  if (opt.samples < 2)
  {
    throw DomainError("tune: need at least two samples");
  }
  scenario.validate();

  std::size_t const  n     = scenario.size();
  OutcomeSpace const space = opt.zeta_hi > 0.0 ? OutcomeSpace::BetaFamily
                                               : OutcomeSpace::Deterministic;
  AmaEngine const    engine(SplitBasis(scenario.roles(), scenario.weights()));

  std::vector<std::vector<double>> bank(opt.samples);
  for (std::size_t k = 0; k < opt.samples; ++k)
  {
    bank[k] = sample_thetas(scenario, k, opt.seed);
  }

  // Free coordinates: mu_2..mu_n, then zeta.
  std::vector<double> lower;
  std::vector<double> upper;
  if (opt.mu_hi > opt.mu_lo)
  {
    for (std::size_t j = 1; j < n; ++j)
    {
      lower.push_back(opt.mu_lo);
      upper.push_back(opt.mu_hi);
    }
  }
  bool const free_mu   = opt.mu_hi > opt.mu_lo && n > 1;
  bool const free_zeta = opt.zeta_hi > opt.zeta_lo;
  if (free_zeta)
  {
    lower.push_back(opt.zeta_lo);
    upper.push_back(opt.zeta_hi);
  }
  std::size_t const dim = lower.size();

  auto const params_of = [&](std::vector<double> const &x) {
    AmaParams   p{std::vector<double>(n, opt.mu_lo), opt.zeta_lo, space};
    std::size_t c = 0;
    p.mu[0]       = 1.0;
    for (std::size_t j = 1; j < n; ++j)
    {
      p.mu[j] = free_mu ? x[c++] : opt.mu_lo;
    }
    if (free_zeta)
    {
      p.zeta = x[c];
    }
    return p;
  };

  std::size_t evaluations = 0;
  auto const  score       = [&](AmaParams const &p) {
    ++evaluations;
    return sample_moments(
        opt.samples,
        [&](std::size_t k) {
          auto const s     = engine.solve(bank[k], p.mu, p.zeta, p.space);
          double     total = 0.0;
          for (double pay : s.payments)
          {
            total += pay;
          }
          return total;
        },
        opt.workers);
  };

  std::vector<double> best_x;
  double              best_value = -std::numeric_limits<double>::infinity();
  auto const          consider   = [&](std::vector<double> const &x) {
    double const v = score(params_of(x)).mean;
    if (v > best_value)
    {
      best_value = v;
      best_x     = x;
    }
    return v;
  };

  if (dim == 0)
  {
    consider({});
  }
  else
  {
    if (opt.grid < 2)
    {
      throw DomainError("tune: grid must have at least two points per coordinate");
    }
    std::vector<std::size_t> index(dim, 0);
    for (;;)
    {
      std::vector<double> x(dim);
      for (std::size_t d = 0; d < dim; ++d)
      {
        x[d] = lower[d] + (upper[d] - lower[d]) * static_cast<double>(index[d]) /
                              static_cast<double>(opt.grid - 1);
      }
      consider(x);
      std::size_t d = 0;
      while (d < dim && ++index[d] == opt.grid)
      {
        index[d++] = 0;
      }
      if (d == dim)
      {
        break;
      }
    }

    std::vector<double> step(dim);
    for (std::size_t d = 0; d < dim; ++d)
    {
      step[d] = (upper[d] - lower[d]) / static_cast<double>(opt.grid - 1);
    }
    nelder_mead([&](std::vector<double> const &x) { return -consider(x); }, best_x, step, lower,
                upper);
  }

  AmaParams const best     = params_of(best_x);
  auto const      moments  = score(best);
  RevenueEstimate estimate{moments.mean, moments.std_error, moments.n, MechanismSpec::ama(best),
                           opt.seed};
  return {best, estimate, evaluations};
}

}  // namespace xmkt
