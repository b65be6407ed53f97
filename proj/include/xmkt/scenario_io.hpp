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

// JSON forms of the library types and the scenario file format.
//
//   piecewise polynomial  {"breakpoints":[0,1],"pieces":[[1,-1]]}   (1 - t)
//   distribution          {"type":"uniform","a":160,"b":400}
//                         {"type":"table","thetas":[...],"pdf":[...]}
//   ama params            {"mu":[1,13],"zeta":31,"space":"beta"}
//   scenario              {"version":1,"agents":[{"role":"offender","c":...,
//                          "distribution":...,"theta":300}, ...],
//                          "defaults":{"seed":42,"n":1000000}}

#include "xmkt/ama.hpp"
#include "xmkt/distribution.hpp"
#include "xmkt/errors.hpp"
#include "xmkt/model.hpp"
#include "xmkt/piecewise.hpp"
#include "xmkt/sim.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace xmkt {

using json = nlohmann::json;

inline constexpr int kScenarioVersion = 1;

/// The two-agent market used throughout the documentation and the acceptance suite.
inline constexpr std::string_view kBundledScenario = R"({
  "version": 1,
  "agents": [
    {
      "role": "offender",
      "c": {"breakpoints": [0, 1], "pieces": [[1, -1]]},
      "distribution": {"type": "uniform", "a": 160, "b": 400},
      "theta": 300
    },
    {
      "role": "defender",
      "c": {"breakpoints": [0, 1], "pieces": [[1]]},
      "distribution": {"type": "uniform", "a": 0.5, "b": 15},
      "theta": 10
    }
  ],
  "defaults": {"seed": 42, "n": 1000000}
}
)";

/// Rounds to six significant digits for reports.
inline double report_round(double v)
{
  if (!std::isfinite(v) || v == 0.0)
  {
    return v;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::stod(buf);
}

inline json report_array(std::vector<double> const &values)
{
  json out = json::array();
  for (double v : values)
  {
    out.push_back(report_round(v));
  }
  return out;
}

namespace detail {

/// Reads a required member, reporting the JSON path on failure.
template <typename T>
T field(json const &obj, std::string const &key, std::string const &path)
{
  if (!obj.is_object() || !obj.contains(key))
  {
    throw InvariantError(path + "." + key + ": required field is missing");
  }
  try
  {
    return obj.at(key).get<T>();
  }
  catch (json::exception const &)
  {
    throw InvariantError(path + "." + key + ": wrong type " + std::string(obj.at(key).type_name()));
  }
}

template <typename Fn>
auto at_path(std::string const &path, Fn &&fn) -> decltype(fn())
{
  try
  {
    return fn();
  }
  catch (InvariantError const &e)
  {
    std::string const what = e.what();
    if (what.rfind(path, 0) == 0)
    {
      throw;
    }
    throw InvariantError(path + ": " + what);
  }
}

}  // namespace detail

inline json to_json(PiecewisePolynomial const &pp)
{
  return json{{"breakpoints", pp.breakpoints()}, {"pieces", pp.pieces()}};
}

inline PiecewisePolynomial piecewise_from_json(json const &j, std::string const &path = "c")
{
  auto bps    = detail::field<std::vector<double>>(j, "breakpoints", path);
  auto pieces = detail::field<std::vector<Coefficients>>(j, "pieces", path);
  return detail::at_path(path, [&] { return PiecewisePolynomial(std::move(bps), std::move(pieces)); });
}

inline json to_json(Distribution const &d)
{
  if (d.kind() == Distribution::Kind::Uniform)
  {
    return json{{"type", "uniform"}, {"a", d.lower()}, {"b", d.upper()}};
  }
  return json{{"type", "table"}, {"thetas", d.thetas()}, {"pdf", d.densities()}};
}

inline Distribution distribution_from_json(json const &j,
                                           std::string const &path = "distribution")
{
  auto const type = detail::field<std::string>(j, "type", path);
  if (type == "uniform")
  {
    double const a = detail::field<double>(j, "a", path);
    double const b = detail::field<double>(j, "b", path);
    return detail::at_path(path, [&] { return Distribution::uniform(a, b); });
  }
  if (type == "table")
  {
    auto thetas = detail::field<std::vector<double>>(j, "thetas", path);
    auto pdf    = detail::field<std::vector<double>>(j, "pdf", path);
    return detail::at_path(path, [&] { return Distribution::table(std::move(thetas), std::move(pdf)); });
  }
  throw InvariantError(path + ".type: unknown distribution type '" + type +
                       "' (expected uniform or table)");
}

inline std::string to_string(OutcomeSpace space)
{
  return space == OutcomeSpace::BetaFamily ? "beta" : "det";
}

inline OutcomeSpace space_from_string(std::string const &s)
{
  if (s == "beta")
  {
    return OutcomeSpace::BetaFamily;
  }
  if (s == "det")
  {
    return OutcomeSpace::Deterministic;
  }
  throw InvariantError("space: expected 'det' or 'beta', got '" + s + "'");
}

inline json to_json(AmaParams const &p)
{
  return json{{"mu", report_array(p.mu)}, {"zeta", report_round(p.zeta)}, {"space", to_string(p.space)}};
}

inline AmaParams ama_params_from_json(json const &j, std::string const &path = "params")
{
  AmaParams p;
  p.mu    = detail::field<std::vector<double>>(j, "mu", path);
  p.zeta  = j.contains("zeta") ? detail::field<double>(j, "zeta", path) : 0.0;
  p.space = j.contains("space") ? space_from_string(detail::field<std::string>(j, "space", path))
                                : OutcomeSpace::Deterministic;
  detail::at_path(path, [&] { p.validate(p.mu.size()); });
  return p;
}

inline json to_json(Outcome const &outcome)
{
  if (std::holds_alternative<Deterministic>(outcome))
  {
    return json{{"type", "deterministic"},
                {"t_end", report_round(std::get<Deterministic>(outcome).t_end)}};
  }
  auto const &r = std::get<Randomized>(outcome);
  return json{{"type", "randomized"}, {"beta1", report_round(r.beta1)}, {"beta2", report_round(r.beta2)}};
}

inline json to_json(MechanismSpec const &spec)
{
  json j{{"mechanism", spec.tag()}};
  if (spec.kind == MechanismKind::Ama)
  {
    j["mu"]    = report_array(spec.params.mu);
    j["zeta"]  = report_round(spec.params.zeta);
    j["space"] = to_string(spec.params.space);
  }
  if (spec.kind == MechanismKind::BrokenFlatFee)
  {
    j["fee"] = report_round(spec.fee);
  }
  return j;
}

inline json to_json(MechanismResult const &r, MechanismSpec const &spec)
{
  json j          = to_json(spec);
  j["outcome"]    = to_json(r.outcome);
  j["payments"]   = report_array(r.payments);
  j["valuations"] = report_array(r.valuations);
  j["utilities"]  = report_array(r.utilities);
  j["revenue"]    = report_round(r.revenue());
  return j;
}

/// One estimate record, e.g. {"mechanism":"ama","mu":[1,13],"zeta":31,...,"seed":42}.
inline json to_json(RevenueEstimate const &e)
{
  json j      = to_json(e.mechanism);
  j["n"]      = e.n;
  j["mean"]   = report_round(e.mean);
  j["stderr"] = report_round(e.std_error);
  j["seed"]   = e.seed;
  return j;
}

inline json to_json(Scenario const &s)
{
  json agents = json::array();
  for (auto const &a : s.agents)
  {
    json agent{{"role", std::string(to_string(a.role))},
               {"c", to_json(a.weight)},
               {"distribution", to_json(a.distribution)}};
    if (a.theta)
    {
      agent["theta"] = *a.theta;
    }
    agents.push_back(std::move(agent));
  }
  return json{{"version", kScenarioVersion},
              {"agents", std::move(agents)},
              {"defaults", {{"seed", s.seed}, {"n", s.samples}}}};
}

/// Parses and validates a scenario document. ParseError for bad JSON, InvariantError otherwise.
inline Scenario parse_scenario_text(std::string_view text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (json::parse_error const &e)
  {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }

  if (!doc.is_object())
  {
    throw InvariantError("scenario: top level must be an object");
  }
  auto const version = detail::field<int>(doc, "version", "scenario");
  if (version != kScenarioVersion)
  {
    throw InvariantError("scenario.version: unsupported version " + std::to_string(version));
  }
  auto const agents = detail::field<json>(doc, "agents", "scenario");
  if (!agents.is_array() || agents.empty())
  {
    throw InvariantError("scenario.agents: at least one agent is required");
  }

  Scenario s;
  for (std::size_t i = 0; i < agents.size(); ++i)
  {
    std::string const path = "agents[" + std::to_string(i) + "]";
    auto const       &a    = agents[i];
    AgentTemplate     t;
    auto const        role = detail::field<std::string>(a, "role", path);
    if (role == "offender")
    {
      t.role = Role::Offender;
    }
    else if (role == "defender")
    {
      t.role = Role::Defender;
    }
    else
    {
      throw InvariantError(path + ".role: expected offender or defender, got '" + role + "'");
    }
    t.weight       = piecewise_from_json(detail::field<json>(a, "c", path), path + ".c");
    t.distribution = distribution_from_json(detail::field<json>(a, "distribution", path),
                                            path + ".distribution");
    if (a.contains("theta"))
    {
      double const theta = detail::field<double>(a, "theta", path);
      if (!(theta >= t.distribution.lower() && theta <= t.distribution.upper()))
      {
        throw InvariantError(path + ".theta: " + std::to_string(theta) +
                             " lies outside the distribution support");
      }
      t.theta = theta;
    }
    s.agents.push_back(std::move(t));
  }

  if (doc.contains("defaults"))
  {
    auto const &d = doc.at("defaults");
    if (d.contains("seed"))
    {
      s.seed = detail::field<std::uint64_t>(d, "seed", "defaults");
    }
    if (d.contains("n"))
    {
      s.samples = detail::field<std::size_t>(d, "n", "defaults");
      if (s.samples < 2)
      {
        throw InvariantError("defaults.n: must be >= 2");
      }
    }
  }
  s.validate();
  return s;
}

inline Scenario parse_scenario(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open scenario file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str());
}

inline Scenario bundled_scenario()
{
  return parse_scenario_text(kBundledScenario);
}

}  // namespace xmkt
