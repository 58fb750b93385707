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

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "portalsim/net/addr.hpp"
#include "portalsim/net/ethernet.hpp"

namespace portalsim::fabric {

struct PortId {
  std::uint16_t index = 0;
  auto operator<=>(const PortId&) const = default;
};

struct SwitchId {
  std::uint32_t index = 0;
  auto operator<=>(const SwitchId&) const = default;
};

// Header fields a flow can match on, extracted once per frame.
struct FrameFields {
  net::MacAddr src;
  net::MacAddr dst;
  std::uint16_t ethertype = 0;
  std::optional<net::Ipv4Addr> ip_src;
  std::optional<net::Ipv4Addr> ip_dst;
  std::optional<std::uint8_t> ip_proto;
  std::optional<std::uint16_t> l4_src_port;
  std::optional<std::uint16_t> l4_dst_port;

  bool is_arp() const { return ethertype == net::kEthertypeArp; }
  bool is_ipv4() const { return ip_dst.has_value(); }
};

// Undecodable layers simply leave the corresponding fields empty.
FrameFields inspect(const net::EthernetFrame& frame);

struct FlowMatch {
  std::optional<PortId> in_port;
  std::optional<net::MacAddr> src_mac;
  std::optional<net::MacAddr> dst_mac;
  std::optional<std::uint16_t> ethertype;
  std::optional<net::Ipv4Addr> ip_dst;
  std::optional<std::uint16_t> l4_dst_port;

  // L4 fields require ethertype 0x0800.
  bool valid() const;
  bool matches(PortId port, const FrameFields& fields) const;
  std::string str() const;

  bool operator==(const FlowMatch&) const = default;
};

namespace action {
struct Output {
  PortId port;
  bool operator==(const Output&) const = default;
};
struct Flood {
  bool operator==(const Flood&) const = default;
};
struct ToController {
  bool operator==(const ToController&) const = default;
};
struct Drop {
  bool operator==(const Drop&) const = default;
};
}  // namespace action

using FlowAction = std::variant<action::Output, action::Flood, action::ToController, action::Drop>;
std::string to_string(const FlowAction& action);

struct FlowEntry {
  FlowMatch match;
  int priority = 0;
  FlowAction action;

  bool operator==(const FlowEntry&) const = default;
};

enum class InstallResult { kAdded, kModified, kUnchanged };

// Match-action table. (match, priority) pairs are unique; installing an
// existing pair replaces its action in place and keeps its installation order.
class FlowTable {
 public:
  InstallResult install(FlowEntry entry);
  // Highest priority wins; ties go to the earliest installed entry.
  const FlowEntry* lookup(PortId in_port, const FrameFields& fields) const;
  std::vector<FlowEntry> remove_if(const std::function<bool(const FlowEntry&)>& pred);

  const std::vector<FlowEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<FlowEntry> entries_;  // installation order
};

}  // namespace portalsim::fabric
