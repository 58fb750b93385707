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

#include "portalsim/dns/rewrite.hpp"

#include <utility>

namespace portalsim::dns {

namespace {

struct Ports {
  std::uint16_t src;
  std::uint16_t dst;
};

std::optional<Ports> l4_ports(const net::Ipv4Packet& pkt) {
  if (pkt.protocol == net::kProtoUdp) {
    auto udp = net::decode_udp(pkt.payload);
    if (!udp) return std::nullopt;
    return Ports{udp->src_port, udp->dst_port};
  }
  if (pkt.protocol == net::kProtoTcp) {
    auto tcp = net::decode_tcp(pkt.payload);
    if (!tcp) return std::nullopt;
    return Ports{tcp->src_port, tcp->dst_port};
  }
  return std::nullopt;
}

// Caller guarantees the payload decodes (l4_ports succeeded).
void set_ports(net::Ipv4Packet& pkt, Ports p) {
  if (pkt.protocol == net::kProtoUdp) {
    auto udp = std::move(net::decode_udp(pkt.payload)).value();
    udp.src_port = p.src;
    udp.dst_port = p.dst;
    pkt.payload = net::encode_udp(udp);
  } else {
    auto tcp = std::move(net::decode_tcp(pkt.payload)).value();
    tcp.src_port = p.src;
    tcp.dst_port = p.dst;
    pkt.payload = net::encode_tcp(tcp);
  }
}

const char* proto_name(std::uint8_t p) {
  return p == net::kProtoTcp ? "tcp" : p == net::kProtoUdp ? "udp" : "?";
}

}  // namespace

std::string RewriteRule::str() const {
  std::string s = proto_name(match.protocol);
  s += " ";
  s += match.ip_dst ? match.ip_dst->str() : "*";
  s += ":";
  s += match.l4_dst_port ? std::to_string(*match.l4_dst_port) : "*";
  s += " -> ";
  s += rewrite.new_ip_dst.str();
  if (rewrite.new_l4_dst_port) s += ":" + std::to_string(*rewrite.new_l4_dst_port);
  return s;
}

DnatResult RewriteRuleSet::apply_dnat(net::Ipv4Packet pkt) {
  auto ports = l4_ports(pkt);
  if (!ports) return {std::move(pkt), false};
  for (const auto& rule : rules_) {
    const auto& m = rule.match;
    if (m.protocol != pkt.protocol) continue;
    if (m.ip_dst && *m.ip_dst != pkt.dst) continue;
    if (m.l4_dst_port && *m.l4_dst_port != ports->dst) continue;

    const std::uint16_t new_port = rule.rewrite.new_l4_dst_port.value_or(ports->dst);
    reverse_.insert_or_assign(Key{pkt.src, ports->src, pkt.dst},
                              Reverse{pkt.protocol, ports->dst, rule.rewrite.new_ip_dst, new_port});
    pkt.dst = rule.rewrite.new_ip_dst;
    set_ports(pkt, {ports->src, new_port});
    net::refresh_checksum(pkt);
    return {std::move(pkt), true};
  }
  return {std::move(pkt), false};
}

UndoResult RewriteRuleSet::undo_dnat(net::Ipv4Packet reply) {
  auto ports = l4_ports(reply);
  if (!ports) return {std::move(reply), false};
  for (auto it = reverse_.begin(); it != reverse_.end(); ++it) {
    const auto& [client_ip, client_port, original_dst] = it->first;
    const Reverse& r = it->second;
    if (client_ip != reply.dst || client_port != ports->dst) continue;
    if (r.protocol != reply.protocol || r.rewritten_ip != reply.src ||
        r.rewritten_port != ports->src)
      continue;
    reply.src = original_dst;
    set_ports(reply, {r.original_port, ports->dst});
    net::refresh_checksum(reply);
    reverse_.erase(it);
    return {std::move(reply), true};
  }
  return {std::move(reply), false};
}

}  // namespace portalsim::dns
