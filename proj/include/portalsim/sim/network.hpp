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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "portalsim/dns/engine.hpp"
#include "portalsim/fabric/fabric.hpp"
#include "portalsim/net/ethernet.hpp"
#include "portalsim/net/http.hpp"
#include "portalsim/portal/portal.hpp"
#include "portalsim/sim/event_queue.hpp"
#include "portalsim/sim/topology.hpp"
#include "portalsim/sim/trace.hpp"

namespace portalsim::sim {

inline constexpr Tick kDefaultTcpTimeout = 64;
inline constexpr std::uint32_t kDefaultMaxRedirects = 5;
inline constexpr std::uint16_t kFirstEphemeralPort = 49152;

struct HttpGetAction {
  std::string url;
  // Total runs; 0 repeats until the budget runs out.
  std::uint32_t repeat = 1;
  Tick interval = 1;
  std::optional<std::uint32_t> max_redirects;
};

struct LoginAction {
  std::string user;
  std::string password;
};

struct DnsQueryAction {
  std::string name;
};

using Action = std::variant<HttpGetAction, LoginAction, DnsQueryAction>;
std::string describe(const Action& action);

struct ScriptStep {
  Tick at = 0;
  std::string host;
  Action action;
};

struct Services {
  portal::CaptureTechnique technique = portal::CaptureTechnique::kDnsSpoofing;
  // Dnat rules are installed on the gateway.
  dns::DnsMode dns_mode = dns::mode::SpoofAll{};
  // Genuine answers for authorized clients of a spoofing server.
  dns::ZoneDb zone;
  portal::CredentialStore credentials;
  std::string portal_domain = std::string(dns::kDefaultPortalDomain);
};

struct NetworkOptions {
  Tick tcp_timeout = kDefaultTcpTimeout;
  // Defaults to the DNS server's address.
  std::optional<net::Ipv4Addr> resolver;
  bool auth_channel = true;
  Tick controller_listen = 0;
  std::uint32_t max_redirects = kDefaultMaxRedirects;
};

struct Hop {
  std::string url;
  std::uint16_t status = 0;
};

struct ActionResult {
  std::string host;
  std::string action;
  Tick started = 0;
  Tick finished = 0;
  bool ok = false;
  std::string error;
  std::optional<net::HttpResponse> response;
  std::uint32_t redirects = 0;
  std::vector<Hop> hops;
  std::optional<net::Ipv4Addr> address;
};

struct RunResult {
  bool idle = true;
  Tick now = 0;
  std::vector<std::pair<Tick, std::string>> pending;

  std::string diagnostic() const;
};

struct LinkCounters {
  std::uint64_t enqueued = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
};

struct NetworkImpl;

// Hosts, servers, switches and links driven by one event queue. Building
// validates the topology and throws BuildError.
class Network {
 public:
  Network(Topology topology, Services services, NetworkOptions options = {});
  ~Network();
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  // Steps on one host run in order, each starting no earlier than the previous
  // one finished. Throws std::invalid_argument for a host that is not a user.
  void schedule(ScriptStep step);

  // Pops events until the queue empties or `budget` more ticks have elapsed.
  // Frames still on a link at exhaustion are recorded as dropped.
  RunResult run_until_idle(Tick budget);

  // Schedules one fetch now, runs, and returns its outcome.
  ActionResult http_get(const std::string& host, const std::string& url,
                        std::uint32_t max_redirects = kDefaultMaxRedirects,
                        Tick budget = 100000);

  // Transmits a raw frame from a host's interface at `at`.
  void send_raw(const std::string& host, net::EthernetFrame frame, Tick at);

  Tick now() const;
  const Trace& trace() const;
  std::string trace_text() const;
  const std::vector<ActionResult>& results() const;
  const Topology& topology() const;
  fabric::Fabric& fabric();
  const fabric::Fabric& fabric() const;
  const portal::Portal* portal() const;
  LinkCounters counters() const;
  // Frames a host accepted (addressed to it or broadcast), in arrival order.
  const std::vector<net::EthernetFrame>& accepted(const std::string& host) const;

 private:
  std::unique_ptr<NetworkImpl> impl_;
};

}  // namespace portalsim::sim
