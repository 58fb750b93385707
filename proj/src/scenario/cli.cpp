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

#include "portalsim/scenario/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "portalsim/scenario/check.hpp"
#include "portalsim/scenario/scenario.hpp"
#include "portalsim/scenario/sequence.hpp"

namespace portalsim::scenario {

namespace {

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::optional<Scenario> load(const std::string& path, std::ostream& err) {
  auto s = load_scenario(path);
  if (!s) {
    err << path << ":" << s.error().message() << "\n";
    return std::nullopt;
  }
  return std::move(s).value();
}

std::string_view first_line(std::string_view text) { return text.substr(0, text.find('\n')); }

}  // namespace

int cli_run(const std::string& scenario_path, const std::optional<std::string>& trace_path,
            std::optional<sim::Tick> budget, std::ostream& out, std::ostream& err) {
  auto s = load(scenario_path, err);
  if (!s) return kExitParse;
  auto run = run_scenario(*s, budget);
  if (trace_path) {
    std::ofstream f(*trace_path, std::ios::binary);
    f << run.trace_text;
    if (!f) {
      err << "cannot write '" << *trace_path << "'\n";
      return kExitMismatch;
    }
  } else {
    out << run.trace_text;
  }
  if (!run.run.idle) {
    err << run.run.diagnostic() << "\n";
    return kExitLivelock;
  }
  return kExitOk;
}

int cli_check(const std::string& scenario_path, const std::string& golden_path, std::ostream& out,
              std::ostream& err) {
  auto golden = slurp(golden_path);
  if (!golden) {
    err << "cannot read '" << golden_path << "'\n";
    return kExitMismatch;
  }
  auto s = load(scenario_path, err);
  if (!s) return kExitParse;
  auto run = run_scenario(*s);
  auto result = compare_traces(*golden, run.trace_text);
  switch (result.status) {
    case CheckStatus::kIdentical:
      out << "ok: " << golden_path << "\n";
      return kExitOk;
    case CheckStatus::kVersionMismatch:
      err << result.message() << "\n";
      return kExitVersion;
    case CheckStatus::kDiffers:
      err << result.message() << "\n";
      return kExitMismatch;
  }
  return kExitMismatch;
}

int cli_sequence(const std::string& trace_path, std::ostream& out, std::ostream& err) {
  auto text = slurp(trace_path);
  if (!text) {
    err << "cannot read '" << trace_path << "'\n";
    return kExitMismatch;
  }
  const auto header = first_line(*text);
  if (header != sim::kTraceHeader && header.substr(0, 11) == "portaltrace") {
    err << trace_path << ": unsupported trace version '" << header << "'\n";
    return kExitVersion;
  }
  auto rendered = render_sequence_text(*text);
  if (!rendered) {
    err << trace_path << ":" << rendered.error().message() << "\n";
    return kExitParse;
  }
  out << *rendered;
  return kExitOk;
}

}  // namespace portalsim::scenario
