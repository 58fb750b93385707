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

#include "portalsim/sim/topology.hpp"

#include <map>
#include <set>

namespace portalsim::sim {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kUser: return "user";
    case Role::kDns: return "dns";
    case Role::kPortal: return "portal";
    case Role::kNat: return "nat";
    case Role::kController: return "controller";
  }
  return "?";
}

std::string_view to_string(BuildErrorCode code) {
  switch (code) {
    case BuildErrorCode::kDuplicateName: return "duplicate-name";
    case BuildErrorCode::kDuplicateMac: return "duplicate-mac";
    case BuildErrorCode::kDuplicateIp: return "duplicate-ip";
    case BuildErrorCode::kDanglingReference: return "dangling-reference";
    case BuildErrorCode::kBadPort: return "bad-port";
    case BuildErrorCode::kPortInUse: return "port-in-use";
    case BuildErrorCode::kBadLatency: return "bad-latency";
    case BuildErrorCode::kCycle: return "cycle";
    case BuildErrorCode::kDisconnected: return "disconnected";
  }
  return "?";
}

std::string LinkEnd::str() const {
  return port ? node + ":" + std::to_string(*port) : node;
}

const HostSpec* Topology::host(const std::string& name) const {
  for (const auto& h : hosts) {
    if (h.name == name) return &h;
  }
  return nullptr;
}

Role Topology::role_of(const std::string& host) const {
  if (servers.dns == host) return Role::kDns;
  if (servers.portal == host) return Role::kPortal;
  if (servers.nat == host) return Role::kNat;
  if (servers.controller == host) return Role::kController;
  return Role::kUser;
}

namespace {

// Union-find over node names, for cycle and connectivity checks.
class Components {
 public:
  void add(const std::string& n) { parent_.emplace(n, n); }
  std::string find(const std::string& n) {
    std::string root = n;
    while (parent_.at(root) != root) root = parent_.at(root);
    return root;
  }
  bool unite(const std::string& a, const std::string& b) {
    auto ra = find(a), rb = find(b);
    if (ra == rb) return false;
    parent_[ra] = rb;
    return true;
  }
  std::size_t count() {
    std::set<std::string> roots;
    for (const auto& [n, p] : parent_) roots.insert(find(n));
    return roots.size();
  }

 private:
  std::map<std::string, std::string> parent_;
};

}  // namespace

void validate(const Topology& topo) {
  std::set<std::string> names;
  std::map<net::MacAddr, std::string> macs;
  std::map<net::Ipv4Addr, std::string> ips;
  std::map<std::string, std::uint16_t> switch_ports;
  for (const auto& h : topo.hosts) {
    if (!names.insert(h.name).second) throw BuildError(BuildErrorCode::kDuplicateName, h.name);
    if (!macs.emplace(h.mac, h.name).second)
      throw BuildError(BuildErrorCode::kDuplicateMac, h.mac.str());
    if (!ips.emplace(h.ip, h.name).second)
      throw BuildError(BuildErrorCode::kDuplicateIp, h.ip.str());
  }
  for (const auto& s : topo.switches) {
    if (!names.insert(s.name).second) throw BuildError(BuildErrorCode::kDuplicateName, s.name);
    switch_ports.emplace(s.name, s.port_count);
  }
  for (const auto& site : topo.sites) {
    if (ips.count(site.ip)) throw BuildError(BuildErrorCode::kDuplicateIp, site.ip.str());
  }
  for (const auto* ref : {&topo.servers.dns, &topo.servers.portal, &topo.servers.nat,
                          &topo.servers.controller}) {
    if (*ref && !topo.host(**ref)) throw BuildError(BuildErrorCode::kDanglingReference, **ref);
  }

  Components comp;
  for (const auto& n : names) comp.add(n);
  std::set<std::string> used;
  for (const auto& link : topo.links) {
    if (link.latency < 1) throw BuildError(BuildErrorCode::kBadLatency, link.a.str());
    for (const LinkEnd* end : {&link.a, &link.b}) {
      if (!names.count(end->node))
        throw BuildError(BuildErrorCode::kDanglingReference, end->node);
      auto sw = switch_ports.find(end->node);
      if (sw != switch_ports.end()) {
        if (!end->port || *end->port < 1 || *end->port > sw->second)
          throw BuildError(BuildErrorCode::kBadPort, end->str());
      } else if (end->port) {
        throw BuildError(BuildErrorCode::kBadPort, end->str());
      }
      if (!used.insert(end->str()).second) throw BuildError(BuildErrorCode::kPortInUse, end->str());
    }
    if (!comp.unite(link.a.node, link.b.node))
      throw BuildError(BuildErrorCode::kCycle, link.a.str() + " -- " + link.b.str());
  }
  if (comp.count() > 1) throw BuildError(BuildErrorCode::kDisconnected, "link graph");
}

Topology fig1_topology(std::size_t users) {
  using A = Fig1Addresses;
  Topology t;
  for (std::size_t i = 0; i < users; ++i) {
    t.hosts.push_back({"user" + std::to_string(i + 1), A::user_mac(i), A::user_ip(i)});
  }
  t.hosts.push_back({"dns", net::MacAddr{{0x02, 0, 0, 0, 0, 0x03}}, A::dns_ip()});
  t.hosts.push_back({"portal", net::MacAddr{{0x02, 0, 0, 0, 0, 0x02}}, A::portal_ip()});
  t.hosts.push_back({"nat", net::MacAddr{{0x02, 0, 0, 0, 0, 0x01}}, A::nat_ip()});
  t.hosts.push_back({"ctrl", net::MacAddr{{0x02, 0, 0, 0, 0, 0x04}}, A::controller_ip()});
  const auto uplink = static_cast<std::uint16_t>(users + 1);
  t.switches.push_back({"sw1", uplink});
  t.switches.push_back({"sw2", 5});
  for (std::size_t i = 0; i < users; ++i) {
    t.links.push_back({{"user" + std::to_string(i + 1), std::nullopt},
                       {"sw1", static_cast<std::uint16_t>(i + 1)}, 1});
  }
  t.links.push_back({{"sw1", uplink}, {"sw2", 1}, 1});
  t.links.push_back({{"dns", std::nullopt}, {"sw2", 2}, 1});
  t.links.push_back({{"portal", std::nullopt}, {"sw2", 3}, 1});
  t.links.push_back({{"nat", std::nullopt}, {"sw2", 4}, 1});
  t.links.push_back({{"ctrl", std::nullopt}, {"sw2", 5}, 1});
  t.servers = {"dns", "portal", "nat", "ctrl"};
  return t;
}

}  // namespace portalsim::sim
