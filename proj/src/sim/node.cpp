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

#include <cstdio>

#include "internal.hpp"

namespace portalsim::sim {

namespace {

std::string hex16(std::uint16_t v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%04x", v);
  return buf;
}

std::string proto_name(std::uint8_t p) {
  if (p == net::kProtoTcp) return "tcp";
  if (p == net::kProtoUdp) return "udp";
  return std::to_string(p);
}

std::string first_line(const std::string& body, std::size_t max) {
  auto nl = body.find('\n');
  std::string line = body.substr(0, nl);
  if (line.size() > max) line.resize(max);
  return line;
}

}  // namespace

Attributes frame_attrs(const net::EthernetFrame& frame) {
  Attributes a;
  a["src"] = frame.src.str();
  a["dst"] = frame.dst.str();
  a["digest"] = net::digest_hex(net::encode_frame(frame));
  if (frame.ethertype == net::kEthertypeArp) {
    a["type"] = "arp";
    if (auto arp = net::decode_arp(frame.payload)) {
      a["op"] = arp->op == net::ArpOp::kRequest ? "request" : "reply";
      a["spa"] = arp->sender_ip.str();
      a["tpa"] = arp->target_ip.str();
    }
    return a;
  }
  if (frame.ethertype != net::kEthertypeIpv4) {
    a["type"] = hex16(frame.ethertype);
    a["len"] = std::to_string(frame.payload.size());
    return a;
  }
  a["type"] = "ipv4";
  auto ip = net::decode_ipv4(frame.payload);
  if (!ip) return a;
  a["ip_src"] = ip->src.str();
  a["ip_dst"] = ip->dst.str();
  a["proto"] = proto_name(ip->protocol);
  if (ip->protocol == net::kProtoUdp) {
    if (auto udp = net::decode_udp(ip->payload)) {
      a["sport"] = std::to_string(udp->src_port);
      a["dport"] = std::to_string(udp->dst_port);
      a["len"] = std::to_string(udp->payload.size());
    }
  } else if (ip->protocol == net::kProtoTcp) {
    if (auto tcp = net::decode_tcp(ip->payload)) {
      a["sport"] = std::to_string(tcp->src_port);
      a["dport"] = std::to_string(tcp->dst_port);
      a["flags"] = tcp->flags.str();
      a["len"] = std::to_string(tcp->payload.size());
    }
  }
  return a;
}

Attributes fields_attrs(const fabric::FrameFields& f) {
  Attributes a;
  a["src"] = f.src.str();
  a["dst"] = f.dst.str();
  a["type"] = f.is_arp() ? "arp" : f.is_ipv4() ? "ipv4" : hex16(f.ethertype);
  if (f.ip_dst) a["ip_dst"] = f.ip_dst->str();
  if (f.l4_dst_port) a["dport"] = std::to_string(*f.l4_dst_port);
  return a;
}

Attributes http_attrs(const net::HttpMessage& msg) {
  Attributes a;
  if (const auto* req = std::get_if<net::HttpRequest>(&msg)) {
    a["msg"] = "request";
    a["method"] = std::string(net::to_string(req->method));
    a["path"] = req->path;
    a["host"] = req->host();
    return a;
  }
  const auto& resp = std::get<net::HttpResponse>(msg);
  a["msg"] = "response";
  a["status"] = std::to_string(resp.status);
  if (auto loc = resp.location()) a["location"] = *loc;
  a["body"] = first_line(resp.body, 48);
  a["len"] = std::to_string(resp.body.size());
  a["digest"] = net::digest_hex(net::to_bytes(resp.body));
  return a;
}

Node::Node(NetworkImpl& net, std::size_t index, const HostSpec& spec, Role role)
    : net_(net), index_(index), name_(spec.name), mac_(spec.mac), ip_(spec.ip), role_(role) {}

Attributes Node::base_attrs() const {
  return {{"at", name_}, {"role", std::string(to_string(role_))}};
}

void Node::host_error(const std::string& code, Attributes extra) {
  Attributes a = base_attrs();
  a["error"] = code;
  a.merge(extra);
  net_.emit(TraceKind::kHostError, std::move(a));
}

void Node::send_frame(net::EthernetFrame frame) {
  Endpoint self;
  self.kind = Endpoint::Kind::kNode;
  self.node = index_;
  net_.transmit(self, std::move(frame));
}

void Node::on_frame(const net::EthernetFrame& frame) {
  if (frame.dst != mac_ && !frame.dst.is_broadcast()) return;
  accepted_.push_back(frame);
  if (frame.ethertype == net::kEthertypeArp) {
    if (auto arp = net::decode_arp(frame.payload)) on_arp(*arp);
    return;
  }
  if (frame.ethertype == net::kEthertypeIpv4) {
    auto pkt = net::decode_ipv4(frame.payload);
    if (!pkt) {
      host_error("malformed-ipv4", {{"detail", pkt.error().message()}});
      return;
    }
    on_ipv4(*pkt, frame);
  }
}

void Node::send_arp(const net::ArpPacket& arp, const net::MacAddr& dst) {
  send_frame({dst, mac_, net::kEthertypeArp, net::encode_arp(arp)});
}

void Node::on_arp(const net::ArpPacket& arp) {
  if (arp.op == net::ArpOp::kRequest) {
    // Gratuitous announcements and requests for other addresses are ignored.
    if (arp.target_ip != ip_ || arp.sender_ip == arp.target_ip) return;
    arp_cache_.insert_or_assign(arp.sender_ip, arp.sender_mac);
    send_arp(net::ArpPacket::reply(mac_, ip_, arp.sender_mac, arp.sender_ip), arp.sender_mac);
  } else {
    if (arp.target_mac != mac_) return;
    arp_cache_.insert_or_assign(arp.sender_ip, arp.sender_mac);
  }
  auto pending = arp_pending_.find(arp.sender_ip);
  if (pending == arp_pending_.end()) return;
  auto packets = std::move(pending->second);
  arp_pending_.erase(pending);
  for (auto& p : packets) send_ip(std::move(p));
}

void Node::send_ip(net::Ipv4Packet pkt) {
  net::Ipv4Addr hop = pkt.dst;
  if (!hop.same_subnet(ip_, 24)) {
    if (!net_.gateway || *net_.gateway == ip_) {
      host_error("no-route", {{"ip_dst", pkt.dst.str()}});
      return;
    }
    hop = *net_.gateway;
  }
  net::refresh_checksum(pkt);
  auto cached = arp_cache_.find(hop);
  if (cached != arp_cache_.end()) {
    send_frame({cached->second, mac_, net::kEthertypeIpv4, net::encode_ipv4(pkt)});
    return;
  }
  auto& queue = arp_pending_[hop];
  queue.push_back(std::move(pkt));
  if (queue.size() == 1) {
    send_arp(net::ArpPacket::request(mac_, ip_, hop), net::MacAddr::broadcast());
  }
}

void Node::send_udp(net::Ipv4Addr src, std::uint16_t sport, net::Ipv4Addr dst,
                    std::uint16_t dport, net::Bytes payload) {
  net::Ipv4Packet pkt;
  pkt.src = src;
  pkt.dst = dst;
  pkt.protocol = net::kProtoUdp;
  pkt.payload = net::encode_udp({sport, dport, std::move(payload)});
  send_ip(std::move(pkt));
}

void Node::on_ipv4(const net::Ipv4Packet& pkt, const net::EthernetFrame& frame) {
  deliver_local(pkt, frame);
}

void Node::deliver_local(const net::Ipv4Packet& pkt, const net::EthernetFrame& frame) {
  if (pkt.protocol == net::kProtoUdp) {
    if (pkt.dst != ip_) return;
    auto udp = net::decode_udp(pkt.payload);
    if (!udp) {
      host_error("malformed-udp", {{"detail", udp.error().message()}});
      return;
    }
    on_udp(pkt, *udp, frame);
  } else if (pkt.protocol == net::kProtoTcp) {
    auto seg = net::decode_tcp(pkt.payload);
    if (!seg) {
      host_error("malformed-tcp", {{"detail", seg.error().message()}});
      return;
    }
    on_tcp(pkt, *seg, frame);
  }
}

// TCP

void Node::tcp_listen(std::uint16_t port, std::function<bool(net::Ipv4Addr)> accept_dst,
                      std::function<TcpHandlers(ConnId)> factory) {
  listeners_[port] = Listener{std::move(accept_dst), std::move(factory)};
}

Node::ConnId Node::tcp_connect(net::Ipv4Addr dst, std::uint16_t port, TcpHandlers handlers) {
  const ConnId id = next_conn_++;
  Conn c;
  c.key = Key{ip_, ephemeral_port(), dst, port};
  c.state = TcpState::kSynSent;
  c.snd_nxt = 1000;
  c.handlers = std::move(handlers);
  by_key_.emplace(c.key, id);
  auto& stored = conns_.emplace(id, std::move(c)).first->second;
  send_segment(stored, {true, false, false}, {});
  return id;
}

void Node::send_segment(Conn& c, net::TcpFlags flags, const std::string& payload) {
  const auto& [lip, lport, rip, rport] = c.key;
  net::TcpSegment seg;
  seg.src_port = lport;
  seg.dst_port = rport;
  seg.seq = c.snd_nxt;
  seg.ack = flags.ack ? c.rcv_nxt : 0;
  seg.flags = flags;
  seg.payload = net::to_bytes(payload);
  c.snd_nxt += seg.seq_len();
  net::Ipv4Packet pkt;
  pkt.src = lip;
  pkt.dst = rip;
  pkt.protocol = net::kProtoTcp;
  pkt.payload = net::encode_tcp(seg);
  send_ip(std::move(pkt));
}

void Node::tcp_send(ConnId id, const std::string& data) {
  auto it = conns_.find(id);
  if (it == conns_.end() || it->second.state != TcpState::kEstablished || data.empty()) return;
  send_segment(it->second, {false, true, false}, data);
}

void Node::tcp_close(ConnId id) {
  auto it = conns_.find(id);
  if (it == conns_.end() || it->second.fin_sent) return;
  it->second.fin_sent = true;
  send_segment(it->second, {false, true, true}, {});
}

void Node::tcp_abort(ConnId id) { forget(id); }

void Node::forget(ConnId id) {
  auto it = conns_.find(id);
  if (it == conns_.end()) return;
  by_key_.erase(it->second.key);
  conns_.erase(it);
  http_buffers_.erase(id);
}

std::optional<Node::ConnInfo> Node::tcp_info(ConnId id) const {
  auto it = conns_.find(id);
  if (it == conns_.end()) return std::nullopt;
  const auto& [lip, lport, rip, rport] = it->second.key;
  return ConnInfo{lip, lport, rip, rport, it->second.peer_mac};
}

void Node::on_tcp(const net::Ipv4Packet& pkt, const net::TcpSegment& seg,
                  const net::EthernetFrame& frame) {
  const Key key{pkt.dst, seg.dst_port, pkt.src, seg.src_port};
  auto found = by_key_.find(key);
  if (found == by_key_.end()) {
    auto listener = listeners_.find(seg.dst_port);
    const bool opening = seg.flags.syn && !seg.flags.ack;
    if (!opening || listener == listeners_.end() || !listener->second.accept_dst(pkt.dst)) {
      if (pkt.dst == ip_ || opening) {
        host_error(opening ? "tcp-unreachable" : "tcp-stray",
                   {{"peer", pkt.src.str() + ":" + std::to_string(seg.src_port)},
                    {"port", std::to_string(seg.dst_port)}});
      }
      return;
    }
    const ConnId id = next_conn_++;
    Conn c;
    c.key = key;
    c.state = TcpState::kSynReceived;
    c.snd_nxt = 5000;
    c.rcv_nxt = seg.seq + 1;
    c.peer_mac = frame.src;
    c.handlers = listener->second.factory(id);
    by_key_.emplace(key, id);
    auto& stored = conns_.emplace(id, std::move(c)).first->second;
    send_segment(stored, {true, true, false}, {});
    return;
  }

  const ConnId id = found->second;
  Conn& c = conns_.at(id);
  c.peer_mac = frame.src;
  if (c.state == TcpState::kSynSent) {
    if (!(seg.flags.syn && seg.flags.ack)) return;
    c.rcv_nxt = seg.seq + 1;
    c.state = TcpState::kEstablished;
    send_segment(c, {false, true, false}, {});
    auto cb = c.handlers.on_established;
    if (cb) cb(id);
    return;
  }
  if (seg.flags.syn) return;
  if (c.state == TcpState::kSynReceived && seg.flags.ack) {
    c.state = TcpState::kEstablished;
    auto cb = c.handlers.on_established;
    if (cb) cb(id);
  }
  if (!seg.payload.empty()) {
    auto it = conns_.find(id);
    if (it == conns_.end()) return;
    it->second.rcv_nxt += static_cast<std::uint32_t>(seg.payload.size());
    auto cb = it->second.handlers.on_data;
    if (cb) cb(id, net::to_string(seg.payload));
  }
  if (seg.flags.fin) {
    auto it = conns_.find(id);
    if (it == conns_.end()) return;
    it->second.rcv_nxt += 1;
    if (!it->second.fin_sent) {
      it->second.fin_sent = true;
      send_segment(it->second, {false, true, true}, {});
    }
    auto cb = it->second.handlers.on_closed;
    forget(id);
    if (cb) cb(id);
  }
}

// HTTP server

void Node::http_listen(std::uint16_t port, std::function<bool(net::Ipv4Addr)> accept_dst,
                       HttpHandler handler) {
  tcp_listen(port, std::move(accept_dst), [this, handler](ConnId) {
    TcpHandlers h;
    h.on_data = [this, handler](ConnId id, const std::string& data) {
      auto& buf = http_buffers_[id];
      buf += data;
      while (auto n = net::complete_http_length(buf)) {
        const std::string text = buf.substr(0, *n);
        buf.erase(0, *n);
        auto msg = net::parse_http(text);
        Attributes a = base_attrs();
        if (msg) {
          a.merge(http_attrs(*msg));
        } else {
          a["msg"] = "malformed";
        }
        auto info = tcp_info(id);
        if (!info) return;
        a["peer"] = info->remote_ip.str() + ":" + std::to_string(info->remote_port);
        net_.emit(TraceKind::kHttpRx, std::move(a));
        handler(id, msg, *info);
        if (!tcp_info(id)) return;
      }
    };
    return h;
  });
}

void Node::http_respond(ConnId id, const net::HttpResponse& response) {
  auto info = tcp_info(id);
  if (!info) return;
  Attributes a = base_attrs();
  a.merge(http_attrs(response));
  a["peer"] = info->remote_ip.str() + ":" + std::to_string(info->remote_port);
  net_.emit(TraceKind::kHttpTx, std::move(a));
  tcp_send(id, net::render_http(response));
  tcp_close(id);
}

}  // namespace portalsim::sim
