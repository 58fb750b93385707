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

#include <iostream>

#include "CLI11.hpp"
#include "portalsim/scenario/cli.hpp"

namespace ps = portalsim::scenario;

int main(int argc, char** argv) {
  CLI::App app{"portalsim: deterministic captive-portal network emulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::optional<std::string> trace_out;
  std::optional<portalsim::sim::Tick> budget;
  auto* run = app.add_subcommand("run", "Run a scenario and write its trace");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("-o,--output", trace_out, "Trace file (default: stdout)");
  run->add_option("--budget", budget, "Tick budget, overriding the scenario's")
      ->check(CLI::PositiveNumber);

  std::string golden;
  auto* check = app.add_subcommand("check", "Re-run a scenario and diff against a golden trace");
  check->add_option("scenario", scenario, "Scenario file")->required();
  check->add_option("golden", golden, "Golden trace")->required();

  std::string trace;
  auto* sequence = app.add_subcommand("sequence", "Render a trace as a sequence diagram");
  sequence->add_option("trace", trace, "Trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ps::kExitParse;
  }

  if (*run) return ps::cli_run(scenario, trace_out, budget, std::cout, std::cerr);
  if (*check) return ps::cli_check(scenario, golden, std::cout, std::cerr);
  return ps::cli_sequence(trace, std::cout, std::cerr);
}
