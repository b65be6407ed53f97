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

// Revenue-optimal mechanism for single-parameter agents: pick the disclosure
// time maximizing the virtual surplus sum_i phi_i(theta_i) x_i(t), then charge
// theta_i x_i(theta_i) - int_0^theta_i x_i(z) dz.

#include "xmkt/distribution.hpp"
#include "xmkt/errors.hpp"
#include "xmkt/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace xmkt {

/// x_i below this counts as "not served" when locating the activation threshold.
inline constexpr double kActiveShare = 1e-12;

/// Bisection tolerance on the activation threshold z*.
inline constexpr double kThresholdTolerance = 1e-10;

/// Absolute tolerance of the payment quadrature.
inline constexpr double kPaymentQuadratureTolerance = 1e-8;

struct MyersonAllocation
{
  double              t_end{0.0};
  std::vector<double> x;
  double              objective{0.0};
};

namespace detail {

template <typename F>
double simpson_step(F &f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth)
{
  double const m     = 0.5 * (a + b);
  double const lm    = 0.5 * (a + m);
  double const rm    = 0.5 * (m + b);
  double const flm   = f(lm);
  double const frm   = f(rm);
  double const left  = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double const right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double const delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
  {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature with Richardson correction; depth-capped at 48 halvings.
template <typename F>
double adaptive_simpson(F &&f, double a, double b, double tol)
{
  if (b <= a)
  {
    return 0.0;
  }
  double const fa = f(a);
  double const fb = f(b);
  double const m  = 0.5 * (a + b);
  double const fm = f(m);
  return detail::simpson_step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol,
                              48);
}

/**
 * The optimal mechanism for one fixed set of weight curves and priors.
 *
 * Built once per scenario; every query takes the reported thetas. All queries
 * are pure and run on a fixed evaluation schedule, so results do not depend on
 * the order in which profiles are processed.
 */
class MyersonEngine
{
public:
  MyersonEngine(SplitBasis basis, std::vector<Distribution> priors)
    : basis_(std::move(basis))
    , priors_(std::move(priors))
  {
    if (priors_.size() != basis_.size())
    {
      throw ModelError("myerson: one prior per agent required");
    }
    for (std::size_t i = 0; i < priors_.size(); ++i)
    {
      if (!priors_[i].hazard_rate_monotone())
      {
        auto const report = priors_[i].compute_mhr(kDefaultMhrGrid);
        std::string detail;
        if (report.violation)
        {
          detail = ": virtual value drops from " + std::to_string(report.violation->phi_lo) +
                   " at theta " + std::to_string(report.violation->theta_lo) + " to " +
                   std::to_string(report.violation->phi_hi) + " at theta " +
                   std::to_string(report.violation->theta_hi);
        }
        throw PreconditionError("myerson: prior of agent " + std::to_string(i + 1) +
                                " fails the monotone hazard rate check" + detail);
      }
    }
  }

  static MyersonEngine of(Profile const &profile)
  {
    std::vector<Distribution> priors;
    for (std::size_t i = 0; i < profile.size(); ++i)
    {
      auto const &agent = profile[i];
      if (!agent.theta || !agent.distribution)
      {
        throw ModelError("myerson: agent " + std::to_string(i + 1) +
                         " is not a single-parameter agent with a prior");
      }
      priors.push_back(*agent.distribution);
    }
    return MyersonEngine(SplitBasis::of_weights(profile), std::move(priors));
  }

  static std::vector<double> reports(Profile const &profile)
  {
    std::vector<double> thetas(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i)
    {
      thetas[i] = profile[i].theta.value_or(0.0);
    }
    return thetas;
  }

  SplitBasis const &basis() const noexcept
  {
    return basis_;
  }

  std::vector<Distribution> const &priors() const noexcept
  {
    return priors_;
  }

  MyersonAllocation allocate(std::span<double const> thetas) const
  {
    check_reports(thetas);
    std::vector<double> phis(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i)
    {
      phis[i] = priors_[i].virtual_value(thetas[i]);
    }
    Maximum const     best = basis_.maximize(phis);
    MyersonAllocation out;
    out.t_end     = best.t;
    out.objective = best.value;
    out.x.resize(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i)
    {
      out.x[i] = basis_.share(i, best.t);
    }
    return out;
  }

  /// x_i when agent i reports z and everybody else reports as in `thetas`.
  double share_at(std::span<double const> thetas, std::size_t i, double z) const
  {
    check_reports(thetas);
    Sweep sweep(*this, thetas, i);
    return sweep(z);
  }

  /// Smallest own report with x_i > kActiveShare, located by bisection on [0, theta_i].
  double activation_threshold(std::span<double const> thetas, std::size_t i) const
  {
    check_reports(thetas);
    Sweep sweep(*this, thetas, i);
    return threshold(sweep, thetas[i]);
  }

  double payment(std::span<double const> thetas, std::size_t i) const
  {
    check_reports(thetas);
    if (i >= thetas.size())
    {
      throw DomainError("payment: no agent " + std::to_string(i + 1));
    }
    Sweep        sweep(*this, thetas, i);
    double const theta   = thetas[i];
    double const x_theta = sweep(theta);
    if (x_theta <= kActiveShare)
    {
      return 0.0;
    }
    double const z_star   = threshold(sweep, theta);
    double const integral = adaptive_simpson(sweep, z_star, theta, kPaymentQuadratureTolerance);
    return std::max(0.0, theta * x_theta - integral);
  }

  std::vector<double> payments(std::span<double const> thetas) const
  {
    std::vector<double> out(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i)
    {
      out[i] = payment(thetas, i);
    }
    return out;
  }

private:
  /// z -> x_i(z) with the other reports held fixed.
  class Sweep
  {
  public:
    Sweep(MyersonEngine const &engine, std::span<double const> thetas, std::size_t i)
      : engine_(engine)
      , phis_(thetas.size())
      , agent_(i)
    {
      for (std::size_t j = 0; j < thetas.size(); ++j)
      {
        phis_[j] = j == i ? 0.0 : engine.priors_[j].virtual_value(thetas[j]);
      }
    }

    double operator()(double z)
    {
      phis_[agent_] = engine_.priors_[agent_].virtual_value(z);
      return engine_.basis_.share(agent_, engine_.basis_.maximize(phis_).t);
    }

  private:
    MyersonEngine const &engine_;
    std::vector<double>  phis_;
    std::size_t          agent_;
  };

  static double threshold(Sweep &sweep, double theta)
  {
    if (sweep(0.0) > kActiveShare)
    {
      return 0.0;
    }
    double lo = 0.0;
    double hi = theta;
    while (hi - lo > kThresholdTolerance)
    {
      double const mid = 0.5 * (lo + hi);
      if (sweep(mid) > kActiveShare)
      {
        hi = mid;
      }
      else
      {
        lo = mid;
      }
    }
    return hi;
  }

  void check_reports(std::span<double const> thetas) const
  {
    if (thetas.size() != priors_.size())
    {
      throw ModelError("myerson: one report per agent required");
    }
    for (std::size_t i = 0; i < thetas.size(); ++i)
    {
      if (!(thetas[i] >= priors_[i].lower() && thetas[i] <= priors_[i].upper()))
      {
        throw PreconditionError("myerson: agent " + std::to_string(i + 1) + " report " +
                                std::to_string(thetas[i]) + " outside its support [" +
                                std::to_string(priors_[i].lower()) + ", " +
                                std::to_string(priors_[i].upper()) + "]");
      }
    }
  }

  SplitBasis                basis_;
  std::vector<Distribution> priors_;
};

inline MyersonAllocation allocate(Profile const &profile)
{
  return MyersonEngine::of(profile).allocate(MyersonEngine::reports(profile));
}

inline double payment(Profile const &profile, std::size_t i)
{
  return MyersonEngine::of(profile).payment(MyersonEngine::reports(profile), i);
}

inline MechanismResult run_myerson(Profile const &profile)
{
  auto const engine     = MyersonEngine::of(profile);
  auto const thetas     = MyersonEngine::reports(profile);
  auto const allocation = engine.allocate(thetas);
  return make_result(profile, Deterministic{allocation.t_end}, engine.payments(thetas));
}

}  // namespace xmkt
