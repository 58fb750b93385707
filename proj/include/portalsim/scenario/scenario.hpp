// Copyright 2026 The portalsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "portalsim/result.hpp"
#include "portalsim/sim/network.hpp"

namespace portalsim::scenario {

inline constexpr std::string_view kScenarioHeader = "portalsim-scenario 1";
inline constexpr sim::Tick kDefaultBudget = 100000;

// Diagnostic codes, one per rejected invariant.
inline constexpr std::string_view kErrSyntax = "E-SYNTAX";
inline constexpr std::string_view kErrScriptOrder = "E-SCRIPT-ORDER";
inline constexpr std::string_view kErrUnknownHost = "E-UNKNOWN-HOST";
inline constexpr std::string_view kErrTechniqueMode = "E-TECHNIQUE-MODE";
inline constexpr std::string_view kErrTopology = "E-TOPOLOGY";

struct ScenarioError {
  std::string code;
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based
  std::string detail;

  // "<line>:<col>: <code>: <detail>"
  std::string message() const;
};

struct Scenario {
  sim::Topology topology;
  sim::Services services;
  sim::NetworkOptions options;
  sim::Tick budget = kDefaultBudget;
  std::vector<net::MacAddr> preauthorized;
  std::vector<sim::ScriptStep> script;
};

Result<Scenario, ScenarioError> parse_scenario(std::string_view text);
Result<Scenario, ScenarioError> load_scenario(const std::string& path);

struct ScenarioRun {
  sim::RunResult run;
  sim::Trace trace;
  std::string trace_text;
  std::vector<sim::ActionResult> results;
};

// Builds and runs to idle or the budget (the scenario's unless overridden).
ScenarioRun run_scenario(const Scenario& scenario, std::optional<sim::Tick> budget = std::nullopt);

}  // namespace portalsim::scenario
