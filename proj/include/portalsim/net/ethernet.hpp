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

#include "portalsim/net/addr.hpp"
#include "portalsim/net/bytes.hpp"
#include "portalsim/net/decode_error.hpp"

namespace portalsim::net {

inline constexpr std::uint16_t kEthertypeIpv4 = 0x0800;
inline constexpr std::uint16_t kEthertypeArp = 0x0806;
inline constexpr std::size_t kEthernetHeaderLen = 14;

// Ethernet II without FCS or padding.
struct EthernetFrame {
  MacAddr dst;
  MacAddr src;
  std::uint16_t ethertype = 0;
  Bytes payload;

  bool operator==(const EthernetFrame&) const = default;
};

Bytes encode_frame(const EthernetFrame& frame);
// Any ethertype is accepted at this layer; the payload is everything past the
// 14-octet header.
Decoded<EthernetFrame> decode_frame(ByteView wire);

inline constexpr std::size_t kArpLen = 28;

enum class ArpOp : std::uint16_t { kRequest = 1, kReply = 2 };

// Ethernet/IPv4 ARP (htype 1, ptype 0x0800, hlen 6, plen 4).
struct ArpPacket {
  ArpOp op = ArpOp::kRequest;
  MacAddr sender_mac;
  Ipv4Addr sender_ip;
  MacAddr target_mac;
  Ipv4Addr target_ip;

  static ArpPacket request(MacAddr sender_mac, Ipv4Addr sender_ip, Ipv4Addr target_ip) {
    return {ArpOp::kRequest, sender_mac, sender_ip, MacAddr::zero(), target_ip};
  }
  static ArpPacket reply(MacAddr sender_mac, Ipv4Addr sender_ip, MacAddr target_mac,
                         Ipv4Addr target_ip) {
    return {ArpOp::kReply, sender_mac, sender_ip, target_mac, target_ip};
  }

  bool operator==(const ArpPacket&) const = default;
};

Bytes encode_arp(const ArpPacket& arp);
Decoded<ArpPacket> decode_arp(ByteView wire);

}  // namespace portalsim::net
