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

#include "portalsim/scenario/sequence.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "portalsim/portal/portal.hpp"

namespace portalsim::scenario {

std::string_view to_string(Lifeline l) {
  switch (l) {
    case Lifeline::kUser: return "user";
    case Lifeline::kFabric: return "fabric";
    case Lifeline::kDns: return "DNS";
    case Lifeline::kPortal: return "portal";
    case Lifeline::kController: return "controller";
    case Lifeline::kNat: return "NAT/Internet";
  }
  return "?";
}

namespace {

using sim::TraceEvent;
using sim::TraceKind;

std::optional<Lifeline> lifeline_of(const std::string& role) {
  if (role == "user") return Lifeline::kUser;
  if (role == "dns") return Lifeline::kDns;
  if (role == "portal") return Lifeline::kPortal;
  if (role == "controller") return Lifeline::kController;
  if (role == "nat") return Lifeline::kNat;
  return std::nullopt;
}

std::string peer_ip(const std::string& peer) { return peer.substr(0, peer.find(':')); }

std::string dns_label(const std::string& source) {
  if (source == "spoofed") return "spoofed DNS answer";
  if (source == "genuine") return "genuine answer";
  if (source == "portal") return "portal answer";
  if (source == "nxdomain") return "NXDOMAIN answer";
  return source + " answer";
}

bool starts_with(const std::string& s, std::string_view prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

std::string response_label(const TraceEvent& e, Lifeline server) {
  const auto status = e.value("status");
  const auto body = e.value("body");
  if (status == "302") return "302 redirect";
  if (starts_with(body, portal::kLoginMarker)) return "login page";
  if (starts_with(body, portal::kAlreadyMarker)) return "already authorized";
  if (server == Lifeline::kNat && status == "200") return "site page";
  return "HTTP " + status;
}

}  // namespace

std::vector<SequenceItem> sequence_items(const sim::Trace& trace) {
  std::vector<SequenceItem> out;
  std::set<std::pair<std::string, std::string>> asked;
  std::map<std::pair<std::string, std::string>, std::string> methods;  // (server, peer) -> method

  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& e = trace[i];
    const auto line = lifeline_of(e.value("role"));
    switch (e.kind) {
      case TraceKind::kDnsAnswer: {
        const auto client = e.value("client");
        const bool again = !asked.insert({client, e.value("name")}).second;
        out.push_back({e.tick, true, Lifeline::kUser, Lifeline::kDns,
                       again ? "DNS re-query" : "DNS query", client});
        out.push_back({e.tick, true, Lifeline::kDns, Lifeline::kUser,
                       dns_label(e.value("source")), client});
        break;
      }
      case TraceKind::kHttpRx: {
        if (!line || *line == Lifeline::kUser || e.value("msg") != "request") break;
        const auto method = e.value("method");
        methods[{e.value("at"), e.value("peer")}] = method;
        out.push_back({e.tick, true, Lifeline::kUser, *line,
                       method == "GET" ? "HTTP GET" : method + " " + e.value("path"),
                       peer_ip(e.value("peer"))});
        break;
      }
      case TraceKind::kHttpTx: {
        if (!line || *line == Lifeline::kUser || e.value("msg") != "response") break;
        auto it = methods.find({e.value("at"), e.value("peer")});
        const bool post = it != methods.end() && it->second == "POST";
        if (it != methods.end()) methods.erase(it);
        if (post) {
          out.push_back({e.tick, false, *line, *line, e.value("status") + " " + e.value("body"),
                         peer_ip(e.value("peer"))});
        } else {
          out.push_back({e.tick, true, *line, Lifeline::kUser, response_label(e, *line),
                         peer_ip(e.value("peer"))});
        }
        break;
      }
      case TraceKind::kAuthLine: {
        if (e.value("dir") != "tx") break;
        const auto text = e.value("line");
        if (line == Lifeline::kPortal) {
          out.push_back({e.tick, true, Lifeline::kPortal, Lifeline::kController,
                         text.substr(0, text.find(' ')) + " line", {}});
        } else if (line == Lifeline::kController) {
          out.push_back({e.tick, false, Lifeline::kController, Lifeline::kController,
                         "replies " + text, {}});
        }
        break;
      }
      case TraceKind::kFlowMod: {
        if (e.value("op") != "remove") break;
        std::size_t n = 1;
        while (i + 1 < trace.size() && trace[i + 1].kind == TraceKind::kFlowMod &&
               trace[i + 1].tick == e.tick && trace[i + 1].value("op") == "remove") {
          ++n;
          ++i;
        }
        out.push_back({e.tick, false, Lifeline::kFabric, Lifeline::kFabric,
                       std::to_string(n) + " flow(s) flushed", {}});
        break;
      }
      case TraceKind::kHostError: {
        if (line != Lifeline::kUser) break;
        out.push_back({e.tick, false, Lifeline::kUser, Lifeline::kUser,
                       e.value("at") + " error " + e.value("error"), {}});
        break;
      }
      default: break;
    }
  }
  return out;
}

std::vector<std::string> arrow_labels(const sim::Trace& trace) {
  std::vector<std::string> out;
  for (const auto& item : sequence_items(trace)) {
    if (item.arrow) out.push_back(item.label);
  }
  return out;
}

namespace {

constexpr std::size_t kMargin = 8;
constexpr std::size_t kWidth = 14;

std::size_t center(Lifeline l) { return kMargin + kWidth * static_cast<std::size_t>(l) + kWidth / 2; }

std::string blank_row() {
  std::string row(kMargin + kWidth * kLifelineCount, ' ');
  for (std::size_t i = 0; i < kLifelineCount; ++i) row[center(static_cast<Lifeline>(i))] = '|';
  return row;
}

void place(std::string& row, std::size_t at, std::string_view text) {
  if (row.size() < at + text.size()) row.resize(at + text.size(), ' ');
  row.replace(at, text.size(), text);
}

std::string trimmed(std::string s) {
  s.erase(s.find_last_not_of(' ') + 1);
  return s;
}

}  // namespace

std::string render_sequence(const sim::Trace& trace) {
  const auto items = sequence_items(trace);
  std::set<std::string> clients;
  for (const auto& item : items) {
    if (!item.client.empty()) clients.insert(item.client);
  }
  const bool tag = clients.size() > 1;

  std::string out;
  std::string names(kMargin + kWidth * kLifelineCount, ' ');
  place(names, 0, "tick");
  for (std::size_t i = 0; i < kLifelineCount; ++i) {
    const auto name = to_string(static_cast<Lifeline>(i));
    place(names, center(static_cast<Lifeline>(i)) - name.size() / 2, name);
  }
  out += trimmed(names) + "\n";
  out += trimmed(blank_row()) + "\n";

  for (const auto& item : items) {
    const std::string tick = std::to_string(item.tick);
    if (!item.arrow) {
      std::string row = blank_row();
      place(row, 0, tick);
      const std::string note = "[" + item.label + "]";
      place(row, center(item.from) + 2, note);
      out += trimmed(row) + "\n";
      continue;
    }
    const auto a = center(item.from);
    const auto b = center(item.to);
    const auto lo = std::min(a, b);
    const auto hi = std::max(a, b);

    std::string label = blank_row();
    std::string text = item.label;
    if (tag) text += " (" + item.client + ")";
    const std::size_t span = hi - lo - 1;
    const std::size_t start = text.size() < span ? lo + 1 + (span - text.size()) / 2 : lo + 1;
    place(label, start, text);
    out += trimmed(label) + "\n";

    std::string row = blank_row();
    place(row, 0, tick);
    for (std::size_t c = lo + 1; c < hi; ++c) row[c] = '-';
    if (a < b) {
      row[hi - 1] = '>';
    } else {
      row[lo + 1] = '<';
    }
    out += trimmed(row) + "\n";
  }
  return out;
}

Result<std::string, sim::TraceParseError> render_sequence_text(std::string_view trace_text) {
  auto trace = sim::parse_trace(trace_text);
  if (!trace) return trace.error();
  return render_sequence(*trace);
}

}  // namespace portalsim::scenario
