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

#include "portalsim/fabric/flow_table.hpp"

#include <algorithm>
#include <cstdio>

#include "portalsim/net/ipv4.hpp"

namespace portalsim::fabric {

FrameFields inspect(const net::EthernetFrame& frame) {
  FrameFields f;
  f.src = frame.src;
  f.dst = frame.dst;
  f.ethertype = frame.ethertype;
  if (frame.ethertype != net::kEthertypeIpv4) return f;
  auto ip = net::decode_ipv4(frame.payload);
  if (!ip) return f;
  f.ip_src = ip->src;
  f.ip_dst = ip->dst;
  f.ip_proto = ip->protocol;
  // Both UDP and TCP start with the two port fields.
  if ((ip->protocol == net::kProtoUdp || ip->protocol == net::kProtoTcp) &&
      ip->payload.size() >= 4) {
    f.l4_src_port = static_cast<std::uint16_t>((ip->payload[0] << 8) | ip->payload[1]);
    f.l4_dst_port = static_cast<std::uint16_t>((ip->payload[2] << 8) | ip->payload[3]);
  }
  return f;
}

bool FlowMatch::valid() const {
  if (l4_dst_port || ip_dst) return ethertype == net::kEthertypeIpv4;
  return true;
}

bool FlowMatch::matches(PortId port, const FrameFields& f) const {
  if (in_port && *in_port != port) return false;
  if (src_mac && *src_mac != f.src) return false;
  if (dst_mac && *dst_mac != f.dst) return false;
  if (ethertype && *ethertype != f.ethertype) return false;
  if (ip_dst && f.ip_dst != ip_dst) return false;
  if (l4_dst_port && f.l4_dst_port != l4_dst_port) return false;
  return true;
}

std::string FlowMatch::str() const {
  std::string out;
  auto add = [&out](const std::string& part) {
    if (!out.empty()) out += ',';
    out += part;
  };
  if (in_port) add("in_port=" + std::to_string(in_port->index));
  if (src_mac) add("src=" + src_mac->str());
  if (dst_mac) add("dst=" + dst_mac->str());
  if (ethertype) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "0x%04x", *ethertype);
    add(std::string("type=") + buf);
  }
  if (ip_dst) add("ip_dst=" + ip_dst->str());
  if (l4_dst_port) add("l4_dst=" + std::to_string(*l4_dst_port));
  return out.empty() ? "*" : out;
}

std::string to_string(const FlowAction& act) {
  struct Visitor {
    std::string operator()(const action::Output& o) const {
      return "output:" + std::to_string(o.port.index);
    }
    std::string operator()(const action::Flood&) const { return "flood"; }
    std::string operator()(const action::ToController&) const { return "controller"; }
    std::string operator()(const action::Drop&) const { return "drop"; }
  };
  return std::visit(Visitor{}, act);
}

InstallResult FlowTable::install(FlowEntry entry) {
  for (auto& existing : entries_) {
    if (existing.match == entry.match && existing.priority == entry.priority) {
      if (existing.action == entry.action) return InstallResult::kUnchanged;
      existing.action = entry.action;
      return InstallResult::kModified;
    }
  }
  entries_.push_back(std::move(entry));
  return InstallResult::kAdded;
}

const FlowEntry* FlowTable::lookup(PortId in_port, const FrameFields& fields) const {
  const FlowEntry* best = nullptr;
  for (const auto& entry : entries_) {
    // Strict '>' keeps the earliest entry among equal priorities.
    if (entry.match.matches(in_port, fields) && (!best || entry.priority > best->priority)) {
      best = &entry;
    }
  }
  return best;
}

std::vector<FlowEntry> FlowTable::remove_if(const std::function<bool(const FlowEntry&)>& pred) {
  std::vector<FlowEntry> removed;
  auto keep = std::stable_partition(entries_.begin(), entries_.end(),
                                    [&](const FlowEntry& e) { return !pred(e); });
  removed.assign(std::make_move_iterator(keep), std::make_move_iterator(entries_.end()));
  entries_.erase(keep, entries_.end());
  return removed;
}

}  // namespace portalsim::fabric
