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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "portalsim/net/addr.hpp"
#include "portalsim/net/dns.hpp"

namespace portalsim::sim {

enum class Role { kUser, kDns, kPortal, kNat, kController };
std::string_view to_string(Role role);

struct HostSpec {
  std::string name;
  net::MacAddr mac;
  net::Ipv4Addr ip;
};

struct SwitchSpec {
  std::string name;
  std::uint16_t port_count = 0;
};

// A host name, or a switch name with a port ("sw1:3").
struct LinkEnd {
  std::string node;
  std::optional<std::uint16_t> port;

  std::string str() const;
  bool operator==(const LinkEnd&) const = default;
};

struct LinkSpec {
  LinkEnd a;
  LinkEnd b;
  std::uint32_t latency = 1;
};

struct SiteSpec {
  net::DomainName domain;
  net::Ipv4Addr ip;
  std::string page_body;
};

struct ServerRefs {
  std::optional<std::string> dns;
  std::optional<std::string> portal;
  std::optional<std::string> nat;
  std::optional<std::string> controller;
};

struct Topology {
  std::vector<HostSpec> hosts;
  std::vector<SwitchSpec> switches;
  std::vector<LinkSpec> links;
  ServerRefs servers;
  std::vector<SiteSpec> sites;

  Role role_of(const std::string& host) const;
  const HostSpec* host(const std::string& name) const;
  const HostSpec* server(const std::optional<std::string>& ref) const {
    return ref ? host(*ref) : nullptr;
  }
};

enum class BuildErrorCode {
  kDuplicateName,
  kDuplicateMac,
  kDuplicateIp,
  kDanglingReference,
  kBadPort,
  kPortInUse,
  kBadLatency,
  kCycle,
  kDisconnected,
};
std::string_view to_string(BuildErrorCode code);

class BuildError : public std::runtime_error {
 public:
  BuildError(BuildErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}
  BuildErrorCode code() const { return code_; }

 private:
  BuildErrorCode code_;
};

// Throws BuildError on the first violated invariant.
void validate(const Topology& topo);

// users on sw1, uplink to sw2, servers on sw2.
struct Fig1Addresses {
  static net::Ipv4Addr nat_ip() { return net::Ipv4Addr{{10, 0, 0, 1}}; }
  static net::Ipv4Addr portal_ip() { return net::Ipv4Addr{{10, 0, 0, 2}}; }
  static net::Ipv4Addr dns_ip() { return net::Ipv4Addr{{10, 0, 0, 3}}; }
  static net::Ipv4Addr controller_ip() { return net::Ipv4Addr{{10, 0, 0, 4}}; }
  static net::Ipv4Addr user_ip(std::size_t i) {
    return net::Ipv4Addr{{10, 0, 0, static_cast<std::uint8_t>(10 + i)}};
  }
  static net::MacAddr user_mac(std::size_t i) {
    return net::MacAddr{{0xaa, 0xbb, 0xcc, 0xdd, 0xee, static_cast<std::uint8_t>(i + 1)}};
  }
};

Topology fig1_topology(std::size_t users);

}  // namespace portalsim::sim
