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

// xmkt: run, price, tune and verify exploit-market mechanisms.
//
//   xmkt run --mech myerson --theta 300 10
//   xmkt revenue --mech ama --mu 1 13 --zeta 31 -n 1000000
//   xmkt tune --zeta-max 0
//   xmkt verify --mech myerson --mech vcg
//   xmkt reproduce-paper --seed 42 -n 1000000

#include "xmkt/commands.hpp"
#include "xmkt/reproduction.hpp"
#include "xmkt/scenario_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Common
{
  std::string                  scenario_path;
  std::optional<std::uint64_t> seed;
  std::string                  out_path;
  unsigned                     workers{0};
};

void add_common(CLI::App *cmd, Common &c)
{
  cmd->add_option("--scenario", c.scenario_path, "Scenario JSON (default: the bundled market)");
  cmd->add_option("--seed", c.seed, "Master seed (fallback: XMKT_SEED, then the scenario)");
  cmd->add_option("--out", c.out_path, "Write the report here instead of stdout");
  cmd->add_option("--workers", c.workers, "Worker threads (0: hardware concurrency)");
}

void add_mechanism(CLI::App *cmd, xmkt::MechanismOptions &m)
{
  cmd->add_option("--mech", m.mech, "myerson | vcg | ama | broken-paybid | broken-flatfee")
      ->check(CLI::IsMember({"myerson", "vcg", "ama", "broken-paybid", "broken-flatfee"}));
  cmd->add_option("--mu", m.mu, "AMA agent weights, mu_1 = 1");
  cmd->add_option("--zeta", m.zeta, "AMA randomisation bonus");
  cmd->add_option("--space", m.space, "AMA outcome space")->check(CLI::IsMember({"det", "beta"}));
  cmd->add_option("--fee", m.fee, "Flat fee for broken-flatfee");
}

xmkt::Scenario load(Common const &c)
{
  return c.scenario_path.empty() ? xmkt::bundled_scenario() : xmkt::parse_scenario(c.scenario_path);
}

/// Runs body against stdout or the --out file.
template <typename Body>
int with_output(Common const &c, Body &&body)
{
  return xmkt::guarded(std::cerr, [&] {
    if (c.out_path.empty())
    {
      return body(std::cout);
    }
    std::ofstream file(c.out_path);
    if (!file)
    {
      throw xmkt::InvariantError("--out: cannot open '" + c.out_path + "' for writing");
    }
    return body(file);
  });
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Mechanisms for selling zero-day exploits: optimal, VCG and affine maximizers"};
  app.require_subcommand(1);

  // run
  Common                             run_common;
  xmkt::MechanismOptions             run_mech;
  std::vector<double>                run_theta;
  auto                              *run = app.add_subcommand("run", "Run a mechanism on one profile");
  add_common(run, run_common);
  add_mechanism(run, run_mech);
  run->add_option("--theta", run_theta, "Reported types, one per agent");

  // revenue
  Common                     rev_common;
  xmkt::MechanismOptions     rev_mech;
  std::optional<std::size_t> rev_n;
  auto *revenue = app.add_subcommand("revenue", "Monte Carlo expected revenue");
  add_common(revenue, rev_common);
  add_mechanism(revenue, rev_mech);
  revenue->add_option("-n", rev_n, "Sample count (default: the scenario's)")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));

  // tune
  Common            tune_common;
  xmkt::TuneOptions tune_opt;
  auto             *tune = app.add_subcommand("tune", "Search AMA parameters for revenue");
  add_common(tune, tune_common);
  tune->add_option("--mu-min", tune_opt.mu_lo, "Lower bound for mu_2..mu_n");
  tune->add_option("--mu-max", tune_opt.mu_hi, "Upper bound for mu_2..mu_n");
  tune->add_option("--zeta-min", tune_opt.zeta_lo, "Lower bound for zeta");
  tune->add_option("--zeta-max", tune_opt.zeta_hi, "Upper bound for zeta (0: deterministic AMA)");
  tune->add_option("--grid", tune_opt.grid, "Coarse grid points per dimension");
  tune->add_option("-n", tune_opt.samples, "Common-random-number bank size");

  // verify
  Common                   ver_common;
  std::vector<std::string> ver_mechs;
  xmkt::MechanismOptions   ver_mech;
  xmkt::VerifyOptions      ver_opt;
  auto *verify = app.add_subcommand("verify", "Check IR, SP, monotonicity and hazard rates");
  add_common(verify, ver_common);
  verify->add_option("--mech", ver_mechs, "Mechanisms to check (repeatable; default myerson vcg)")
      ->check(CLI::IsMember({"myerson", "vcg", "ama", "broken-paybid", "broken-flatfee"}));
  verify->add_option("--mu", ver_mech.mu, "AMA agent weights");
  verify->add_option("--zeta", ver_mech.zeta, "AMA randomisation bonus");
  verify->add_option("--space", ver_mech.space, "AMA outcome space")->check(CLI::IsMember({"det", "beta"}));
  verify->add_option("--fee", ver_mech.fee, "Flat fee for broken-flatfee");
  verify->add_option("--profiles", ver_opt.profiles, "Sampled profiles");
  verify->add_option("--deviations", ver_opt.deviations, "Misreports per agent and profile");
  verify->add_option("--eps", ver_opt.eps, "Utility tolerance");
  verify->add_option("--grid", ver_opt.grid, "Theta grid for the monotonicity check");

  // reproduce-paper
  Common                 rep_common;
  xmkt::ReproduceOptions rep_opt;
  auto *reproduce = app.add_subcommand("reproduce-paper", "Reference table for the bundled market");
  add_common(reproduce, rep_common);
  reproduce->add_option("-n", rep_opt.n, "Samples per revenue estimate");
  reproduce->add_option("--tune-samples", rep_opt.tune_samples, "Tuning bank size");

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e);
    return code == 0 ? 0 : xmkt::exit_code::kUsage;
  }

  if (run->parsed())
  {
    return with_output(run_common, [&](std::ostream &out) {
      auto const scenario = load(run_common);
      std::optional<std::vector<double>> thetas;
      if (!run_theta.empty())
      {
        thetas = run_theta;
      }
      return xmkt::cmd_run(scenario, run_mech, thetas, out);
    });
  }
  if (revenue->parsed())
  {
    return with_output(rev_common, [&](std::ostream &out) {
      auto const scenario = load(rev_common);
      auto const seed     = xmkt::resolve_seed(rev_common.seed, scenario.seed);
      return xmkt::cmd_revenue(scenario, rev_mech, rev_n.value_or(scenario.samples), seed, out,
                               rev_common.workers);
    });
  }
  if (tune->parsed())
  {
    return with_output(tune_common, [&](std::ostream &out) {
      auto const scenario = load(tune_common);
      tune_opt.seed       = xmkt::resolve_seed(tune_common.seed, scenario.seed);
      tune_opt.workers    = tune_common.workers;
      return xmkt::cmd_tune(scenario, tune_opt, out);
    });
  }
  if (verify->parsed())
  {
    return with_output(ver_common, [&](std::ostream &out) {
      auto scenario = load(ver_common);
      scenario.seed = xmkt::resolve_seed(ver_common.seed, scenario.seed);
      if (ver_mechs.empty())
      {
        ver_mechs = {"myerson", "vcg"};
      }
      for (auto const &name : ver_mechs)
      {
        auto m = ver_mech;
        m.mech = name;
        ver_opt.mechanisms.push_back(xmkt::make_spec(m, scenario.size()));
      }
      return xmkt::cmd_verify(scenario, ver_opt, out);
    });
  }
  return with_output(rep_common, [&](std::ostream &out) {
    auto const scenario = load(rep_common);
    rep_opt.seed        = xmkt::resolve_seed(rep_common.seed, scenario.seed);
    rep_opt.workers     = rep_common.workers;
    return xmkt::cmd_reproduce_paper(scenario, rep_opt, out);
  });
}
