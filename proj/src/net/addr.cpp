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

#include "portalsim/net/addr.hpp"

#include <charconv>
#include <cstdio>

#include "portalsim/net/bytes.hpp"
#include "portalsim/net/decode_error.hpp"

namespace portalsim::net {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::optional<MacAddr> MacAddr::parse(std::string_view text) {
  if (text.size() != 17) return std::nullopt;
  MacAddr mac;
  for (std::size_t i = 0; i < 6; ++i) {
    const std::size_t at = i * 3;
    if (i > 0 && text[at - 1] != ':') return std::nullopt;
    const int hi = hex_value(text[at]);
    const int lo = hex_value(text[at + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    mac.octets[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return mac;
}

std::string MacAddr::str() const {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x", octets[0], octets[1],
                octets[2], octets[3], octets[4], octets[5]);
  return buf;
}

std::optional<Ipv4Addr> Ipv4Addr::parse(std::string_view text) {
  Ipv4Addr addr;
  std::size_t pos = 0;
  for (int i = 0; i < 4; ++i) {
    if (i > 0) {
      if (pos >= text.size() || text[pos] != '.') return std::nullopt;
      ++pos;
    }
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    const std::size_t len = pos - start;
    // No empty parts, no leading zeros, at most three digits.
    if (len == 0 || len > 3 || (len > 1 && text[start] == '0')) return std::nullopt;
    unsigned value = 0;
    std::from_chars(text.data() + start, text.data() + pos, value);
    if (value > 255) return std::nullopt;
    addr.octets[i] = static_cast<std::uint8_t>(value);
  }
  if (pos != text.size()) return std::nullopt;
  return addr;
}

bool Ipv4Addr::same_subnet(Ipv4Addr other, int prefix_len) const {
  if (prefix_len <= 0) return true;
  const std::uint32_t mask = prefix_len >= 32 ? 0xffffffffu : ~(0xffffffffu >> prefix_len);
  return (to_u32() & mask) == (other.to_u32() & mask);
}

std::string Ipv4Addr::str() const {
  return std::to_string(octets[0]) + "." + std::to_string(octets[1]) + "." +
         std::to_string(octets[2]) + "." + std::to_string(octets[3]);
}

std::string digest_hex(ByteView data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : data) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string_view to_string(DecodeErrorCode code) {
  switch (code) {
    case DecodeErrorCode::kTruncated: return "truncated";
    case DecodeErrorCode::kBadEthertype: return "bad-ethertype";
    case DecodeErrorCode::kBadHardwareType: return "bad-hardware-type";
    case DecodeErrorCode::kBadArpOp: return "bad-arp-op";
    case DecodeErrorCode::kBadVersion: return "bad-version";
    case DecodeErrorCode::kBadHeaderLength: return "bad-header-length";
    case DecodeErrorCode::kBadLength: return "bad-length";
    case DecodeErrorCode::kBadChecksum: return "bad-checksum";
    case DecodeErrorCode::kBadProtocol: return "bad-protocol";
    case DecodeErrorCode::kBadFlags: return "bad-flags";
    case DecodeErrorCode::kLabelTooLong: return "label-too-long";
    case DecodeErrorCode::kNameTooLong: return "name-too-long";
    case DecodeErrorCode::kPointerLoop: return "pointer-loop";
    case DecodeErrorCode::kBadPointer: return "bad-pointer";
    case DecodeErrorCode::kBadLabelType: return "bad-label-type";
    case DecodeErrorCode::kBadRdata: return "bad-rdata";
    case DecodeErrorCode::kTrailingData: return "trailing-data";
    case DecodeErrorCode::kBadStartLine: return "bad-start-line";
    case DecodeErrorCode::kBadHeader: return "bad-header";
    case DecodeErrorCode::kBadMethod: return "bad-method";
    case DecodeErrorCode::kBadStatus: return "bad-status";
    case DecodeErrorCode::kBadAddress: return "bad-address";
  }
  return "unknown";
}

std::string DecodeError::message() const {
  std::string out(to_string(code));
  if (!detail.empty()) out += ": " + detail;
  return out;
}

}  // namespace portalsim::net
