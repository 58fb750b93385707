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

#include "portalsim/sim/trace.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace portalsim::sim {

namespace {

constexpr std::array<std::pair<TraceKind, std::string_view>, 11> kKinds = {{
    {TraceKind::kFrameTx, "FrameTx"},
    {TraceKind::kFrameRx, "FrameRx"},
    {TraceKind::kPacketIn, "PacketIn"},
    {TraceKind::kFlowMod, "FlowMod"},
    {TraceKind::kPacketOut, "PacketOut"},
    {TraceKind::kDrop, "Drop"},
    {TraceKind::kDnsAnswer, "DnsAnswer"},
    {TraceKind::kHttpTx, "HttpTx"},
    {TraceKind::kHttpRx, "HttpRx"},
    {TraceKind::kAuthLine, "AuthLine"},
    {TraceKind::kHostError, "HostError"},
}};

bool plain(unsigned char c) { return c > 0x20 && c < 0x7f && c != '%' && c != '='; }

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (unsigned char c : k) {
    if (!(std::isalnum(c) || c == '_')) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(TraceKind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<TraceKind> parse_trace_kind(std::string_view text) {
  for (const auto& [k, name] : kKinds) {
    if (name == text) return k;
  }
  return std::nullopt;
}

std::string escape_value(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (plain(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

std::optional<std::string> unescape_value(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '%') {
      if (i + 2 >= text.size()) return std::nullopt;
      const int hi = hex_digit(text[i + 1]);
      const int lo = hex_digit(text[i + 2]);
      if (hi < 0 || lo < 0) return std::nullopt;
      out.push_back(static_cast<char>(hi * 16 + lo));
      i += 2;
    } else if (!plain(static_cast<unsigned char>(c))) {
      return std::nullopt;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string format_event(const TraceEvent& event) {
  std::string line = std::to_string(event.tick);
  line += ' ';
  line += to_string(event.kind);
  for (const auto& [k, v] : event.attrs) {
    line += ' ';
    line += k;
    line += '=';
    line += escape_value(v);
  }
  return line;
}

std::string format_trace(const Trace& trace) {
  std::string out(kTraceHeader);
  out += '\n';
  for (const auto& e : trace) {
    out += format_event(e);
    out += '\n';
  }
  return out;
}

std::string TraceParseError::message() const {
  return "line " + std::to_string(line) + ": " + detail;
}

Result<TraceEvent, TraceParseError> parse_event(std::string_view line, std::size_t line_no) {
  auto fail = [&](std::string detail) {
    return Result<TraceEvent, TraceParseError>(TraceParseError{line_no, std::move(detail)});
  };
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    auto sp = line.find(' ', pos);
    if (sp == std::string_view::npos) sp = line.size();
    fields.push_back(line.substr(pos, sp - pos));
    pos = sp + 1;
  }
  if (fields.size() < 2) return fail("expected tick and kind");
  TraceEvent ev;
  const auto tick = fields[0];
  auto [ptr, ec] = std::from_chars(tick.data(), tick.data() + tick.size(), ev.tick);
  if (tick.empty() || ec != std::errc() || ptr != tick.data() + tick.size()) {
    return fail("bad tick '" + std::string(tick) + "'");
  }
  auto kind = parse_trace_kind(fields[1]);
  if (!kind) return fail("unknown kind '" + std::string(fields[1]) + "'");
  ev.kind = *kind;
  std::string prev;
  for (std::size_t i = 2; i < fields.size(); ++i) {
    const auto f = fields[i];
    const auto eq = f.find('=');
    if (eq == std::string_view::npos) return fail("attribute without '='");
    std::string key(f.substr(0, eq));
    if (!valid_key(key)) return fail("bad key '" + key + "'");
    if (i > 2 && key <= prev) return fail("keys not sorted at '" + key + "'");
    auto value = unescape_value(f.substr(eq + 1));
    if (!value) return fail("bad escape in '" + key + "'");
    prev = key;
    ev.attrs.emplace(std::move(key), std::move(*value));
  }
  return ev;
}

Result<Trace, TraceParseError> parse_trace(std::string_view text) {
  using R = Result<Trace, TraceParseError>;
  Trace trace;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header) {
      if (line != kTraceHeader) {
        return R(TraceParseError{line_no, "expected header '" + std::string(kTraceHeader) +
                                              "', found '" + std::string(line) + "'"});
      }
      header = true;
      continue;
    }
    if (line.empty()) continue;
    auto ev = parse_event(line, line_no);
    if (!ev) return R(ev.error());
    trace.push_back(std::move(ev).value());
  }
  if (!header) return R(TraceParseError{1, "missing header"});
  return trace;
}

}  // namespace portalsim::sim
