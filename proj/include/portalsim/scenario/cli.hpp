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

#include <iosfwd>
#include <optional>
#include <string>

#include "portalsim/sim/event_queue.hpp"

namespace portalsim::scenario {

enum ExitCode : int {
  kExitOk = 0,
  kExitMismatch = 1,
  kExitParse = 2,
  kExitLivelock = 3,
  kExitVersion = 4,
};

// Writes the trace to `trace_path`, or to `out` when empty.
int cli_run(const std::string& scenario_path, const std::optional<std::string>& trace_path,
            std::optional<sim::Tick> budget, std::ostream& out, std::ostream& err);

int cli_check(const std::string& scenario_path, const std::string& golden_path, std::ostream& out,
              std::ostream& err);

int cli_sequence(const std::string& trace_path, std::ostream& out, std::ostream& err);

}  // namespace portalsim::scenario
