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

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace portalsim::net {

// 48-bit link-layer address. Text form: six lowercase hex pairs joined by ':'.
struct MacAddr {
  std::array<std::uint8_t, 6> octets{};

  static constexpr MacAddr broadcast() { return {{0xff, 0xff, 0xff, 0xff, 0xff, 0xff}}; }
  static constexpr MacAddr zero() { return {}; }
  static std::optional<MacAddr> parse(std::string_view text);

  bool is_broadcast() const { return *this == broadcast(); }
  bool is_zero() const { return *this == zero(); }
  // Group bit set (includes broadcast).
  bool is_multicast() const { return (octets[0] & 0x01) != 0; }
  std::string str() const;

  auto operator<=>(const MacAddr&) const = default;
};

struct Ipv4Addr {
  std::array<std::uint8_t, 4> octets{};

  static constexpr Ipv4Addr from_u32(std::uint32_t v) {
    return {{static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
             static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)}};
  }
  static std::optional<Ipv4Addr> parse(std::string_view text);

  constexpr std::uint32_t to_u32() const {
    return (std::uint32_t{octets[0]} << 24) | (std::uint32_t{octets[1]} << 16) |
           (std::uint32_t{octets[2]} << 8) | std::uint32_t{octets[3]};
  }
  bool same_subnet(Ipv4Addr other, int prefix_len) const;
  std::string str() const;

  auto operator<=>(const Ipv4Addr&) const = default;
};

}  // namespace portalsim::net
