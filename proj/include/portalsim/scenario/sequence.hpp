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
#include "portalsim/sim/trace.hpp"

namespace portalsim::scenario {

enum class Lifeline { kUser, kFabric, kDns, kPortal, kController, kNat };
inline constexpr std::size_t kLifelineCount = 6;
std::string_view to_string(Lifeline l);

struct SequenceItem {
  sim::Tick tick = 0;
  bool arrow = true;  // false: a note attached to `from`
  Lifeline from = Lifeline::kUser;
  Lifeline to = Lifeline::kUser;
  std::string label;
  std::string client;  // user address the exchange belongs to, if known
};

// Teaching-level view of a trace: DNS exchanges, HTTP exchanges and
// auth-channel commands as arrows; login outcomes, controller replies,
// flow flushes and user-side errors as notes.
std::vector<SequenceItem> sequence_items(const sim::Trace& trace);
std::vector<std::string> arrow_labels(const sim::Trace& trace);

std::string render_sequence(const sim::Trace& trace);
Result<std::string, sim::TraceParseError> render_sequence_text(std::string_view trace_text);

}  // namespace portalsim::scenario
