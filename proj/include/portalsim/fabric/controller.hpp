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
#include <set>
#include <string>
#include <vector>

#include "portalsim/fabric/auth_table.hpp"
#include "portalsim/fabric/flow_table.hpp"

namespace portalsim::fabric {

inline constexpr int kPolicyPriority = 100;
inline constexpr int kLearnedPriority = 10;

// Where the walled garden and the NAT uplink live. Every field is optional so
// a plain learning switch needs no configuration at all.
struct ControllerConfig {
  std::optional<net::MacAddr> nat_mac;
  std::optional<net::Ipv4Addr> dns_ip;
  std::optional<net::Ipv4Addr> portal_ip;
  std::optional<net::MacAddr> portal_mac;
  // IP forgery: hand captive port-80 traffic aimed at the uplink to the portal
  // instead of dropping it.
  bool steer_http_to_portal = false;
  // Server MACs that may always reach the uplink (replies to masqueraded
  // traffic come from these).
  std::set<net::MacAddr> trusted;
};

struct PacketOut {
  // Unset means flood out every linked port except the ingress and `exclude`.
  std::optional<PortId> port;
  std::set<PortId> exclude;
  std::optional<net::MacAddr> set_dst_mac;
};

struct ControllerDecision {
  std::vector<FlowEntry> installs;
  std::optional<PacketOut> packet_out;
  // Set when the packet is discarded. Policy drops never install flows.
  std::optional<std::string> drop_reason;
};

// One logical L2 learning controller with a MAC authorization overlay, shared
// by every switch in the fabric.
class Controller {
 public:
  explicit Controller(ControllerConfig config = {}) : config_(std::move(config)) {}

  ControllerDecision packet_in(SwitchId sw, PortId in_port, const net::EthernetFrame& frame);

  // Returns true when the MAC was not already authorized. Flow invalidation is
  // the fabric's job, since it owns the tables.
  bool authorize_mac(const net::MacAddr& mac) { return auth_.authorize(mac); }

  const AuthTable& auth_table() const { return auth_; }
  const ControllerConfig& config() const { return config_; }
  std::optional<PortId> learned_port(SwitchId sw, const net::MacAddr& mac) const;
  const std::map<net::MacAddr, PortId>& learning_table(SwitchId sw) const;

  // True when the frame may leave toward the NAT uplink given its source's
  // current authorization.
  bool uplink_permitted(const FrameFields& fields) const;

 private:
  bool is_gated(const net::MacAddr& dst) const { return config_.nat_mac && dst == *config_.nat_mac; }
  bool walled_garden(const FrameFields& fields) const;
  bool cleared(const net::MacAddr& src) const {
    return auth_.is_authorized(src) || config_.trusted.count(src) != 0;
  }

  ControllerConfig config_;
  AuthTable auth_;
  std::map<SwitchId, std::map<net::MacAddr, PortId>> learned_;
};

}  // namespace portalsim::fabric
