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

#include "portalsim/net/ethernet.hpp"

#include <algorithm>

namespace portalsim::net {

namespace {

void put_mac(ByteWriter& w, const MacAddr& mac) { w.bytes(mac.octets); }
void put_ip(ByteWriter& w, const Ipv4Addr& ip) { w.bytes(ip.octets); }

MacAddr take_mac(ByteView v) {
  MacAddr mac;
  std::copy_n(v.begin(), 6, mac.octets.begin());
  return mac;
}

Ipv4Addr take_ip(ByteView v) {
  Ipv4Addr ip;
  std::copy_n(v.begin(), 4, ip.octets.begin());
  return ip;
}

}  // namespace

Bytes encode_frame(const EthernetFrame& frame) {
  ByteWriter w;
  put_mac(w, frame.dst);
  put_mac(w, frame.src);
  w.u16(frame.ethertype);
  w.bytes(frame.payload);
  return std::move(w).take();
}

Decoded<EthernetFrame> decode_frame(ByteView wire) {
  if (wire.size() < kEthernetHeaderLen) {
    return decode_error(DecodeErrorCode::kTruncated,
                        "ethernet header needs 14 octets, got " + std::to_string(wire.size()));
  }
  EthernetFrame frame;
  frame.dst = take_mac(wire.subspan(0, 6));
  frame.src = take_mac(wire.subspan(6, 6));
  frame.ethertype = static_cast<std::uint16_t>((wire[12] << 8) | wire[13]);
  // 0x0600 and up is an ethertype; anything lower is an 802.3 length field.
  if (frame.ethertype < 0x0600) {
    return decode_error(DecodeErrorCode::kBadEthertype, "802.3 length field is not supported");
  }
  auto payload = wire.subspan(kEthernetHeaderLen);
  frame.payload.assign(payload.begin(), payload.end());
  return frame;
}

Bytes encode_arp(const ArpPacket& arp) {
  ByteWriter w;
  w.u16(1);  // htype: Ethernet
  w.u16(kEthertypeIpv4);
  w.u8(6);
  w.u8(4);
  w.u16(static_cast<std::uint16_t>(arp.op));
  put_mac(w, arp.sender_mac);
  put_ip(w, arp.sender_ip);
  put_mac(w, arp.target_mac);
  put_ip(w, arp.target_ip);
  return std::move(w).take();
}

Decoded<ArpPacket> decode_arp(ByteView wire) {
  if (wire.size() < kArpLen) {
    return decode_error(DecodeErrorCode::kTruncated,
                        "arp needs 28 octets, got " + std::to_string(wire.size()));
  }
  ByteReader r(wire);
  const auto htype = *r.u16();
  const auto ptype = *r.u16();
  const auto hlen = *r.u8();
  const auto plen = *r.u8();
  if (htype != 1 || ptype != kEthertypeIpv4 || hlen != 6 || plen != 4) {
    return decode_error(DecodeErrorCode::kBadHardwareType, "only Ethernet/IPv4 ARP is supported");
  }
  const auto op = *r.u16();
  if (op != 1 && op != 2) {
    return decode_error(DecodeErrorCode::kBadArpOp, "op " + std::to_string(op));
  }
  ArpPacket arp;
  arp.op = static_cast<ArpOp>(op);
  arp.sender_mac = take_mac(*r.take(6));
  arp.sender_ip = take_ip(*r.take(4));
  arp.target_mac = take_mac(*r.take(6));
  arp.target_ip = take_ip(*r.take(4));
  if (r.remaining() != 0) {
    return decode_error(DecodeErrorCode::kTrailingData, "arp is exactly 28 octets");
  }
  if (arp.op == ArpOp::kRequest && !arp.target_mac.is_zero()) {
    return decode_error(DecodeErrorCode::kBadArpOp, "request with non-zero target mac");
  }
  return arp;
}

}  // namespace portalsim::net
