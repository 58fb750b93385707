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

#include "portalsim/fabric/controller.hpp"

#include "portalsim/net/dns.hpp"
#include "portalsim/net/http.hpp"
#include "portalsim/net/ipv4.hpp"

namespace portalsim::fabric {

std::optional<PortId> Controller::learned_port(SwitchId sw, const net::MacAddr& mac) const {
  auto table = learned_.find(sw);
  if (table == learned_.end()) return std::nullopt;
  auto it = table->second.find(mac);
  if (it == table->second.end()) return std::nullopt;
  return it->second;
}

const std::map<net::MacAddr, PortId>& Controller::learning_table(SwitchId sw) const {
  static const std::map<net::MacAddr, PortId> kEmpty;
  auto it = learned_.find(sw);
  return it == learned_.end() ? kEmpty : it->second;
}

namespace {

FlowEntry pair_flow(const net::MacAddr& src, const net::MacAddr& dst, PortId out) {
  FlowMatch m;
  m.src_mac = src;
  m.dst_mac = dst;
  return {m, kLearnedPriority, action::Output{out}};
}

}  // namespace

bool Controller::walled_garden(const FrameFields& f) const {
  if (!f.is_ipv4()) return false;
  if (config_.dns_ip && f.ip_dst == config_.dns_ip) return true;
  if (config_.portal_ip && f.ip_dst == config_.portal_ip) return true;
  return f.l4_dst_port == net::kDnsPort;
}

bool Controller::uplink_permitted(const FrameFields& f) const {
  return f.is_arp() || cleared(f.src) || walled_garden(f);
}

ControllerDecision Controller::packet_in(SwitchId sw, PortId in_port,
                                         const net::EthernetFrame& frame) {
  ControllerDecision decision;
  const FrameFields f = inspect(frame);
  auto& table = learned_[sw];

  // Learn the source, then install pair flows in both directions between it
  // and every host already known on this switch. Flows match the source too,
  // so a host that has never reached the controller still misses the table
  // and gets learned. Flows toward the NAT exist only for authorized sources.
  if (!f.src.is_multicast()) {
    table.insert_or_assign(f.src, in_port);
    for (const auto& [known, port] : table) {
      if (known == f.src || port == in_port) continue;
      if (!is_gated(known) || cleared(f.src)) {
        decision.installs.push_back(pair_flow(f.src, known, port));
      }
      if (!is_gated(f.src) || cleared(known)) {
        decision.installs.push_back(pair_flow(known, f.src, in_port));
      }
    }
  }

  const bool permitted = uplink_permitted(f);

  if (is_gated(f.dst) && !permitted) {
    if (config_.steer_http_to_portal && f.ip_proto == net::kProtoTcp &&
        f.l4_dst_port == net::kHttpPort && config_.portal_mac) {
      auto portal_port = learned_port(sw, *config_.portal_mac);
      if (!portal_port) {
        decision.drop_reason = "portal-location-unknown";
        return decision;
      }
      decision.packet_out = PacketOut{*portal_port, {}, config_.portal_mac};
      return decision;
    }
    decision.drop_reason = "unauthorized";
    return decision;
  }

  auto dst_port = f.dst.is_multicast() ? std::nullopt : learned_port(sw, f.dst);
  if (dst_port) {
    if (*dst_port == in_port) {
      decision.drop_reason = "same-port";
      return decision;
    }
    decision.packet_out = PacketOut{*dst_port, {}, std::nullopt};
    return decision;
  }

  PacketOut out;
  if (!permitted && config_.nat_mac) {
    if (auto uplink = learned_port(sw, *config_.nat_mac)) out.exclude.insert(*uplink);
  }
  decision.packet_out = std::move(out);
  return decision;
}

}  // namespace portalsim::fabric
