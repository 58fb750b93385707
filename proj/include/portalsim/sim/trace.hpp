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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "portalsim/result.hpp"
#include "portalsim/sim/event_queue.hpp"

namespace portalsim::sim {

inline constexpr std::string_view kTraceHeader = "portaltrace/1";

enum class TraceKind {
  kFrameTx,
  kFrameRx,
  kPacketIn,
  kFlowMod,
  kPacketOut,
  kDrop,
  kDnsAnswer,
  kHttpTx,
  kHttpRx,
  kAuthLine,
  kHostError,
};

std::string_view to_string(TraceKind kind);
std::optional<TraceKind> parse_trace_kind(std::string_view text);

using Attributes = std::map<std::string, std::string>;

struct TraceEvent {
  Tick tick = 0;
  TraceKind kind = TraceKind::kFrameTx;
  Attributes attrs;

  const std::string* get(const std::string& key) const {
    auto it = attrs.find(key);
    return it == attrs.end() ? nullptr : &it->second;
  }
  std::string value(const std::string& key) const {
    auto* v = get(key);
    return v ? *v : std::string();
  }

  bool operator==(const TraceEvent&) const = default;
};

using Trace = std::vector<TraceEvent>;

// "<tick> <Kind> k=v ..." with keys sorted and values percent-escaped.
std::string format_event(const TraceEvent& event);
std::string format_trace(const Trace& trace);

struct TraceParseError {
  std::size_t line = 0;  // 1-based
  std::string detail;

  std::string message() const;
};

Result<TraceEvent, TraceParseError> parse_event(std::string_view line, std::size_t line_no = 1);

// Requires the version header on the first line.
Result<Trace, TraceParseError> parse_trace(std::string_view text);

std::string escape_value(std::string_view raw);
std::optional<std::string> unescape_value(std::string_view text);

}  // namespace portalsim::sim
