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

inline constexpr std::uint8_t kProtoTcp = 6;
inline constexpr std::uint8_t kProtoUdp = 17;
inline constexpr std::size_t kIpv4HeaderLen = 20;

// Ones'-complement of the ones'-complement sum of 16-bit big-endian words.
// Fails on odd-length input.
Result<std::uint16_t, DecodeError> ipv4_checksum(ByteView header);

// IPv4 with a fixed 20-octet header (IHL 5, no options, no fragmentation).
struct Ipv4Packet {
  Ipv4Addr src;
  Ipv4Addr dst;
  std::uint8_t protocol = 0;
  std::uint8_t ttl = 64;
  std::uint16_t identification = 0;
  // encode_ipv4 always writes the computed value; decode keeps the wire value.
  std::uint16_t header_checksum = 0;
  Bytes payload;

  bool operator==(const Ipv4Packet&) const = default;
};

// Encodes with a freshly computed header checksum.
Bytes encode_ipv4(const Ipv4Packet& pkt);
// Rejects bad version/IHL, total_length mismatches and checksum failures.
Decoded<Ipv4Packet> decode_ipv4(ByteView wire);
// Recomputes `header_checksum` to match the current header fields.
void refresh_checksum(Ipv4Packet& pkt);

inline constexpr std::size_t kUdpHeaderLen = 8;

// UDP with the checksum carried as zero.
struct UdpDatagram {
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  Bytes payload;

  bool operator==(const UdpDatagram&) const = default;
};

Bytes encode_udp(const UdpDatagram& udp);
Decoded<UdpDatagram> decode_udp(ByteView wire);

inline constexpr std::size_t kTcpHeaderLen = 20;

struct TcpFlags {
  bool syn = false;
  bool ack = false;
  bool fin = false;

  bool operator==(const TcpFlags&) const = default;
  std::string str() const;
};

// Simplified TCP: 20-octet header, no options, window and checksum carried as
// zero. The payload length is whatever follows the header.
struct TcpSegment {
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::uint32_t seq = 0;
  std::uint32_t ack = 0;
  TcpFlags flags;
  Bytes payload;

  // Sequence space consumed by this segment (SYN and FIN count as one each).
  std::uint32_t seq_len() const {
    return static_cast<std::uint32_t>(payload.size()) + (flags.syn ? 1 : 0) + (flags.fin ? 1 : 0);
  }

  bool operator==(const TcpSegment&) const = default;
};

Bytes encode_tcp(const TcpSegment& seg);
// Rejects RST/PSH/URG, data on SYN, and header offsets other than 5.
Decoded<TcpSegment> decode_tcp(ByteView wire);

}  // namespace portalsim::net
