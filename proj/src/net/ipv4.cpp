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

#include "portalsim/net/ipv4.hpp"

#include <algorithm>

namespace portalsim::net {

Result<std::uint16_t, DecodeError> ipv4_checksum(ByteView header) {
  if (header.size() % 2 != 0) {
    return decode_error(DecodeErrorCode::kBadLength, "checksum input must have even length");
  }
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i < header.size(); i += 2) {
    sum += static_cast<std::uint32_t>((header[i] << 8) | header[i + 1]);
    sum = (sum & 0xffff) + (sum >> 16);
  }
  return static_cast<std::uint16_t>(~sum & 0xffff);
}

namespace {

Bytes encode_header(const Ipv4Packet& pkt, std::uint16_t checksum) {
  ByteWriter w;
  w.u8(0x45);
  w.u8(0);  // DSCP/ECN
  w.u16(static_cast<std::uint16_t>(kIpv4HeaderLen + pkt.payload.size()));
  w.u16(pkt.identification);
  w.u16(0);  // flags + fragment offset
  w.u8(pkt.ttl);
  w.u8(pkt.protocol);
  w.u16(checksum);
  w.bytes(pkt.src.octets);
  w.bytes(pkt.dst.octets);
  return std::move(w).take();
}

}  // namespace

void refresh_checksum(Ipv4Packet& pkt) {
  pkt.header_checksum = *ipv4_checksum(encode_header(pkt, 0));
}

Bytes encode_ipv4(const Ipv4Packet& pkt) {
  Bytes header = encode_header(pkt, 0);
  const std::uint16_t checksum = *ipv4_checksum(header);
  header[10] = static_cast<std::uint8_t>(checksum >> 8);
  header[11] = static_cast<std::uint8_t>(checksum);
  header.insert(header.end(), pkt.payload.begin(), pkt.payload.end());
  return header;
}

Decoded<Ipv4Packet> decode_ipv4(ByteView wire) {
  if (wire.size() < kIpv4HeaderLen) {
    return decode_error(DecodeErrorCode::kTruncated,
                        "ipv4 header needs 20 octets, got " + std::to_string(wire.size()));
  }
  if ((wire[0] >> 4) != 4) {
    return decode_error(DecodeErrorCode::kBadVersion, "version " + std::to_string(wire[0] >> 4));
  }
  if ((wire[0] & 0x0f) != 5) {
    return decode_error(DecodeErrorCode::kBadHeaderLength, "options are not supported");
  }
  ByteReader r(wire);
  r.seek(2);
  const std::uint16_t total_length = *r.u16();
  if (total_length > wire.size()) {
    return decode_error(DecodeErrorCode::kTruncated, "total_length " + std::to_string(total_length) +
                                                         " exceeds " + std::to_string(wire.size()));
  }
  if (total_length < kIpv4HeaderLen || total_length != wire.size()) {
    return decode_error(DecodeErrorCode::kBadLength,
                        "total_length " + std::to_string(total_length) + " for " +
                            std::to_string(wire.size()) + " octets");
  }
  if (*ipv4_checksum(wire.subspan(0, kIpv4HeaderLen)) != 0) {
    return decode_error(DecodeErrorCode::kBadChecksum, "header checksum does not verify");
  }
  Ipv4Packet pkt;
  pkt.identification = *r.u16();
  const std::uint16_t frag = *r.u16();
  if ((frag & 0x3fff) != 0) {
    return decode_error(DecodeErrorCode::kBadFlags, "fragments are not supported");
  }
  pkt.ttl = *r.u8();
  pkt.protocol = *r.u8();
  pkt.header_checksum = *r.u16();
  std::copy_n(r.take(4)->begin(), 4, pkt.src.octets.begin());
  std::copy_n(r.take(4)->begin(), 4, pkt.dst.octets.begin());
  auto payload = r.rest();
  pkt.payload.assign(payload.begin(), payload.end());
  return pkt;
}

Bytes encode_udp(const UdpDatagram& udp) {
  ByteWriter w;
  w.u16(udp.src_port);
  w.u16(udp.dst_port);
  w.u16(static_cast<std::uint16_t>(kUdpHeaderLen + udp.payload.size()));
  w.u16(0);
  w.bytes(udp.payload);
  return std::move(w).take();
}

Decoded<UdpDatagram> decode_udp(ByteView wire) {
  if (wire.size() < kUdpHeaderLen) {
    return decode_error(DecodeErrorCode::kTruncated,
                        "udp header needs 8 octets, got " + std::to_string(wire.size()));
  }
  ByteReader r(wire);
  UdpDatagram udp;
  udp.src_port = *r.u16();
  udp.dst_port = *r.u16();
  const std::uint16_t length = *r.u16();
  r.u16();  // checksum, unused
  if (length > wire.size()) {
    return decode_error(DecodeErrorCode::kTruncated, "udp length " + std::to_string(length) +
                                                         " exceeds " + std::to_string(wire.size()));
  }
  if (length != wire.size()) {
    return decode_error(DecodeErrorCode::kBadLength, "udp length " + std::to_string(length) +
                                                         " for " + std::to_string(wire.size()) +
                                                         " octets");
  }
  auto payload = r.rest();
  udp.payload.assign(payload.begin(), payload.end());
  return udp;
}

std::string TcpFlags::str() const {
  std::string out;
  auto add = [&out](const char* name) {
    if (!out.empty()) out += '|';
    out += name;
  };
  if (syn) add("SYN");
  if (fin) add("FIN");
  if (ack) add("ACK");
  return out.empty() ? "-" : out;
}

namespace {

constexpr std::uint8_t kTcpFin = 0x01;
constexpr std::uint8_t kTcpSyn = 0x02;
constexpr std::uint8_t kTcpAck = 0x10;

}  // namespace

Bytes encode_tcp(const TcpSegment& seg) {
  ByteWriter w;
  w.u16(seg.src_port);
  w.u16(seg.dst_port);
  w.u32(seg.seq);
  w.u32(seg.ack);
  w.u8(5 << 4);
  std::uint8_t flags = 0;
  if (seg.flags.fin) flags |= kTcpFin;
  if (seg.flags.syn) flags |= kTcpSyn;
  if (seg.flags.ack) flags |= kTcpAck;
  w.u8(flags);
  w.u16(0);  // window
  w.u16(0);  // checksum
  w.u16(0);  // urgent pointer
  w.bytes(seg.payload);
  return std::move(w).take();
}

Decoded<TcpSegment> decode_tcp(ByteView wire) {
  if (wire.size() < kTcpHeaderLen) {
    return decode_error(DecodeErrorCode::kTruncated,
                        "tcp header needs 20 octets, got " + std::to_string(wire.size()));
  }
  ByteReader r(wire);
  TcpSegment seg;
  seg.src_port = *r.u16();
  seg.dst_port = *r.u16();
  seg.seq = *r.u32();
  seg.ack = *r.u32();
  const std::uint8_t offset = *r.u8();
  if ((offset >> 4) != 5 || (offset & 0x0f) != 0) {
    return decode_error(DecodeErrorCode::kBadHeaderLength, "tcp options are not supported");
  }
  const std::uint8_t flags = *r.u8();
  if ((flags & ~(kTcpFin | kTcpSyn | kTcpAck)) != 0) {
    return decode_error(DecodeErrorCode::kBadFlags, "only SYN, ACK and FIN are modelled");
  }
  seg.flags = {(flags & kTcpSyn) != 0, (flags & kTcpAck) != 0, (flags & kTcpFin) != 0};
  r.u16();
  r.u16();
  r.u16();
  auto payload = r.rest();
  if (seg.flags.syn && !payload.empty()) {
    return decode_error(DecodeErrorCode::kBadFlags, "SYN segments carry no data");
  }
  seg.payload.assign(payload.begin(), payload.end());
  return seg;
}

}  // namespace portalsim::net
