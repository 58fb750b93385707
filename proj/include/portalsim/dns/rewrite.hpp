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
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "portalsim/net/addr.hpp"
#include "portalsim/net/ipv4.hpp"

namespace portalsim::dns {

// Destination NAT rules with connection tracking, standing in for an iptables
// DNAT/REDIRECT chain.
struct RewriteMatch {
  std::uint8_t protocol = net::kProtoUdp;
  std::optional<net::Ipv4Addr> ip_dst;
  std::optional<std::uint16_t> l4_dst_port;

  bool operator==(const RewriteMatch&) const = default;
};

struct Rewrite {
  net::Ipv4Addr new_ip_dst;
  std::optional<std::uint16_t> new_l4_dst_port;

  bool operator==(const Rewrite&) const = default;
};

struct RewriteRule {
  RewriteMatch match;
  Rewrite rewrite;

  std::string str() const;
  bool operator==(const RewriteRule&) const = default;
};

struct DnatResult {
  net::Ipv4Packet packet;
  bool rewritten = false;
};

struct UndoResult {
  net::Ipv4Packet packet;
  bool restored = false;
};

class RewriteRuleSet {
 public:
  RewriteRuleSet() = default;
  explicit RewriteRuleSet(std::vector<RewriteRule> rules) : rules_(std::move(rules)) {}

  void add(RewriteRule rule) { rules_.push_back(std::move(rule)); }
  const std::vector<RewriteRule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

  // First matching rule wins. A rewrite recomputes the header checksum and
  // records what is needed to restore the reply.
  DnatResult apply_dnat(net::Ipv4Packet pkt);

  // Restores the reply's source to the destination the client originally
  // targeted and consumes the tracking entry. Without an entry the packet is
  // returned unchanged with restored = false.
  UndoResult undo_dnat(net::Ipv4Packet reply);

  std::size_t pending() const { return reverse_.size(); }

 private:
  // (client ip, client port, original destination ip)
  using Key = std::tuple<net::Ipv4Addr, std::uint16_t, net::Ipv4Addr>;
  struct Reverse {
    std::uint8_t protocol;
    std::uint16_t original_port;
    net::Ipv4Addr rewritten_ip;
    std::uint16_t rewritten_port;
  };

  std::vector<RewriteRule> rules_;
  std::map<Key, Reverse> reverse_;
};

}  // namespace portalsim::dns
