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

// Command implementations behind the xmkt tool. Each command writes its
// report to a stream and returns the process exit code; argument parsing
// lives in tools/.

#include "xmkt/ama.hpp"
#include "xmkt/errors.hpp"
#include "xmkt/model.hpp"
#include "xmkt/myerson.hpp"
#include "xmkt/scenario_io.hpp"
#include "xmkt/sim.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace xmkt {

namespace exit_code {
inline constexpr int kOk               = 0;
inline constexpr int kUsage            = 1;
inline constexpr int kParse            = 2;
inline constexpr int kInvariant        = 3;
inline constexpr int kPrecondition     = 4;
inline constexpr int kVerifyFailed     = 5;
inline constexpr int kReproduceFailed  = 6;
}  // namespace exit_code

struct MechanismOptions
{
  std::string                mech{"myerson"};
  std::vector<double>        mu;
  double                     zeta{0.0};
  std::optional<std::string> space;
  double                     fee{1.0};
};

/// Builds the mechanism named on the command line for an n-agent scenario.
inline MechanismSpec make_spec(MechanismOptions const &opt, std::size_t n)
{
  if (opt.mech == "myerson")
  {
    return MechanismSpec::myerson();
  }
  if (opt.mech == "vcg")
  {
    return MechanismSpec::vcg();
  }
  if (opt.mech == "ama")
  {
    AmaParams p;
    p.mu    = opt.mu.empty() ? std::vector<double>(n, 1.0) : opt.mu;
    p.zeta  = opt.zeta;
    p.space = opt.space ? space_from_string(*opt.space)
                        : (opt.zeta > 0.0 ? OutcomeSpace::BetaFamily : OutcomeSpace::Deterministic);
    p.validate(n);
    return MechanismSpec::ama(std::move(p));
  }
  if (opt.mech == "broken-paybid")
  {
    return MechanismSpec::broken_pay_bid();
  }
  if (opt.mech == "broken-flatfee")
  {
    return MechanismSpec::broken_flat_fee(opt.fee);
  }
  throw InvariantError("--mech: unknown mechanism '" + opt.mech + "'");
}

/// Seed precedence: explicit flag, then XMKT_SEED, then the scenario default.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t fallback)
{
  if (flag)
  {
    return *flag;
  }
  if (char const *env = std::getenv("XMKT_SEED"); env != nullptr && *env != '\0')
  {
    try
    {
      return std::stoull(env);
    }
    catch (std::exception const &)
    {
      throw InvariantError(std::string("XMKT_SEED: not an unsigned integer: '") + env + "'");
    }
  }
  return fallback;
}

/// Runs fn and maps library exceptions onto exit codes, writing the message to err.
template <typename Fn>
int guarded(std::ostream &err, Fn &&fn)
{
  try
  {
    return fn();
  }
  catch (ParseError const &e)
  {
    err << "parse error: " << e.what() << '\n';
    return exit_code::kParse;
  }
  catch (PreconditionError const &e)
  {
    err << "mechanism precondition failed: " << e.what() << '\n';
    return exit_code::kPrecondition;
  }
  catch (ModelError const &e)
  {
    err << "mechanism precondition failed: " << e.what() << '\n';
    return exit_code::kPrecondition;
  }
  catch (Error const &e)
  {
    err << "invalid input: " << e.what() << '\n';
    return exit_code::kInvariant;
  }
}

inline int cmd_run(Scenario const &scenario, MechanismOptions const &mech,
                   std::optional<std::vector<double>> thetas, std::ostream &out)
{
  auto const spec = make_spec(mech, scenario.size());
  if (!thetas)
  {
    thetas = scenario.fixed_thetas();
    if (!thetas)
    {
      throw PreconditionError("run: pass --theta or store a theta for every agent in the scenario");
    }
  }
  if (thetas->size() != scenario.size())
  {
    throw InvariantError("--theta: expected " + std::to_string(scenario.size()) + " values, got " +
                         std::to_string(thetas->size()));
  }
  for (std::size_t i = 0; i < thetas->size(); ++i)
  {
    auto const &d = scenario.agents[i].distribution;
    if (!((*thetas)[i] >= d.lower() && (*thetas)[i] <= d.upper()))
    {
      throw PreconditionError("agent " + std::to_string(i + 1) + " theta " +
                              std::to_string((*thetas)[i]) + " lies outside its support");
    }
  }
  Evaluator const evaluator(scenario, spec);
  auto const      result = evaluator.run(scenario.profile(*thetas));
  out << to_json(result, evaluator.spec()).dump() << '\n';
  return exit_code::kOk;
}

inline int cmd_revenue(Scenario scenario, MechanismOptions const &mech, std::size_t n,
                       std::uint64_t seed, std::ostream &out, unsigned workers = 0)
{
  auto const spec = make_spec(mech, scenario.size());
  scenario.seed   = seed;
  out << to_json(estimate_revenue(scenario, spec, n, workers)).dump() << '\n';
  return exit_code::kOk;
}

inline int cmd_tune(Scenario const &scenario, TuneOptions const &opt, std::ostream &out)
{
  auto const result = tune(scenario, opt);
  json       j      = to_json(result.estimate);
  j["command"]      = "tune";
  j["evaluations"]  = result.evaluations;

  // Revenue of the optimal mechanism on the same sample bank, when it applies.
  Scenario bank = scenario;
  bank.seed     = opt.seed;
  try
  {
    auto const optimal = estimate_revenue(bank, MechanismSpec::myerson(), opt.samples, opt.workers);
    j["optimal_mean"]  = report_round(optimal.mean);
    j["ratio"]         = report_round(result.estimate.mean / optimal.mean);
  }
  catch (PreconditionError const &)
  {
    j["optimal_mean"] = nullptr;
  }
  out << j.dump() << '\n';
  return exit_code::kOk;
}

struct VerifyOptions
{
  std::vector<MechanismSpec> mechanisms;
  std::size_t                profiles{1000};
  std::size_t                deviations{20};
  double                     eps{1e-6};
  std::size_t                grid{200};
  std::size_t                fixings{50};
  std::size_t                mhr_grid{kDefaultMhrGrid};
};

inline json violations_json(std::vector<Violation> const &vs, std::size_t limit = 5)
{
  json out = json::array();
  for (std::size_t k = 0; k < vs.size() && k < limit; ++k)
  {
    out.push_back({{"sample", vs[k].sample},
                   {"agent", vs[k].agent},
                   {"deviation", vs[k].deviation},
                   {"truthful_utility", report_round(vs[k].truthful_utility)},
                   {"deviation_utility", report_round(vs[k].deviation_utility)},
                   {"seed", vs[k].seed}});
  }
  return out;
}

/// Runs the hazard-rate, IR, SP and monotonicity checks; exit 0 iff all pass.
inline int cmd_verify(Scenario const &scenario, VerifyOptions const &opt, std::ostream &out)
{
  bool ok = true;

  bool mhr_ok = true;
  for (std::size_t i = 0; i < scenario.size(); ++i)
  {
    auto const report = check_mhr(scenario.agents[i].distribution, opt.mhr_grid);
    json       j{{"check", "mhr"}, {"agent", i + 1}, {"pass", report.pass}};
    if (report.violation)
    {
      j["violation"] = {{"theta_lo", report.violation->theta_lo},
                        {"theta_hi", report.violation->theta_hi},
                        {"phi_lo", report_round(report.violation->phi_lo)},
                        {"phi_hi", report_round(report.violation->phi_hi)}};
    }
    mhr_ok = mhr_ok && report.pass;
    out << j.dump() << '\n';
  }

  for (auto const &spec : opt.mechanisms)
  {
    json const head = to_json(spec);
    if (spec.kind == MechanismKind::Myerson && !mhr_ok)
    {
      json j   = head;
      j["check"] = "myerson";
      j["pass"]  = false;
      j["error"] = "monotone hazard rate check failed; the optimal mechanism is undefined";
      out << j.dump() << '\n';
      ok = false;
      continue;
    }

    auto const ir = check_ir(scenario, spec, opt.profiles, opt.eps);
    json       j  = head;
    j["check"]      = "ir";
    j["profiles"]   = opt.profiles;
    j["violations"] = ir.size();
    j["examples"]   = violations_json(ir);
    j["pass"]       = ir.empty();
    out << j.dump() << '\n';
    ok = ok && ir.empty();

    auto const sp = check_sp(scenario, spec, opt.profiles, opt.deviations, opt.eps);
    j               = head;
    j["check"]      = "sp";
    j["profiles"]   = opt.profiles;
    j["deviations"] = opt.deviations;
    j["violations"] = sp.size();
    j["examples"]   = violations_json(sp);
    j["pass"]       = sp.empty();
    out << j.dump() << '\n';
    ok = ok && sp.empty();

    for (std::size_t i = 0; i < scenario.size(); ++i)
    {
      auto const mono = check_monotone_allocation(scenario, spec, i, opt.grid, opt.fixings);
      j               = head;
      j["check"]      = "monotone";
      j["agent"]      = i + 1;
      j["pass"]       = mono.pass;
      if (mono.violation)
      {
        j["violation"] = {{"fixing", mono.violation->fixing},
                          {"theta_lo", mono.violation->theta_lo},
                          {"theta_hi", mono.violation->theta_hi},
                          {"x_lo", mono.violation->share_lo},
                          {"x_hi", mono.violation->share_hi}};
      }
      out << j.dump() << '\n';
      ok = ok && mono.pass;
    }
  }

  out << json{{"verdict", ok ? "pass" : "fail"}}.dump() << '\n';
  return ok ? exit_code::kOk : exit_code::kVerifyFailed;
}

}  // namespace xmkt
