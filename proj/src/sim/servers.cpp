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

#include "internal.hpp"

#include "portalsim/auth/server.hpp"

namespace portalsim::sim {

namespace {

void announce(Node& node, const net::MacAddr& mac, const net::Ipv4Addr& ip) {
  auto arp = net::ArpPacket::request(mac, ip, ip);
  node.send_frame({net::MacAddr::broadcast(), mac, net::kEthertypeArp, net::encode_arp(arp)});
}

net::DomainName domain(const std::string& text) {
  auto d = net::DomainName::parse(text);
  return d ? std::move(d).value() : net::DomainName{};
}

}  // namespace

// DNS

DnsServerNode::DnsServerNode(NetworkImpl& net, std::size_t index, const HostSpec& spec)
    : Node(net, index, spec, Role::kDns), portal_domain_(domain(net.services.portal_domain)) {
  // Authorized clients of a spoofing server are answered from the same zone a
  // proxy would use.
  const auto& mode = net.services.dns_mode;
  genuine_ = dns::mode::Proxy{net.services.zone};
  if (const auto* p = std::get_if<dns::mode::Proxy>(&mode)) {
    genuine_ = *p;
  } else if (const auto* d = std::get_if<dns::mode::Dnat>(&mode)) {
    genuine_ = dns::mode::Proxy{d->inner};
  }
}

void DnsServerNode::boot() { announce(*this, mac_, ip_); }

void DnsServerNode::on_udp(const net::Ipv4Packet& pkt, const net::UdpDatagram& udp,
                           const net::EthernetFrame& frame) {
  if (udp.dst_port != net::kDnsPort) return;
  auto query = net::decode_dns(udp.payload);
  if (!query) {
    host_error("malformed-dns", {{"detail", query.error().message()}});
    return;
  }
  const auto& portal_ip = net_.portal ? std::optional(net_.portal->ip()) : std::nullopt;
  const net::Ipv4Addr pip = portal_ip.value_or(net::Ipv4Addr{});
  const bool authorized = net_.fabric.controller().auth_table().is_authorized(frame.src);
  const bool spoofing = std::holds_alternative<dns::mode::SpoofAll>(net_.services.dns_mode);
  const auto& mode = spoofing && authorized ? genuine_ : net_.services.dns_mode;
  auto answer = dns::answer_query(mode, *query, pip, portal_domain_);

  Attributes a = base_attrs();
  a["client"] = pkt.src.str();
  a["source"] = std::string(dns::to_string(answer.kind));
  a["id"] = std::to_string(answer.message.id);
  if (!query->questions.empty()) a["name"] = query->questions.front().qname.str();
  if (!answer.message.answers.empty()) {
    const auto& rec = answer.message.answers.front();
    if (rec.rdata.size() == 4) {
      a["answer"] = net::Ipv4Addr{{rec.rdata[0], rec.rdata[1], rec.rdata[2], rec.rdata[3]}}.str();
    }
    a["ttl"] = std::to_string(rec.ttl);
  }
  a["rcode"] = std::to_string(static_cast<int>(answer.message.rcode));
  net_.emit(TraceKind::kDnsAnswer, std::move(a));

  auto wire = net::encode_dns(answer.message);
  if (!wire) {
    host_error("dns-encode", {{"detail", wire.error().message()}});
    return;
  }
  send_udp(ip_, net::kDnsPort, pkt.src, udp.src_port, std::move(wire).value());
}

// Portal

PortalNode::PortalNode(NetworkImpl& net, std::size_t index, const HostSpec& spec)
    : Node(net, index, spec, Role::kPortal),
      portal_({net.services.technique, spec.ip, net.services.portal_domain},
              net.services.credentials) {}

void PortalNode::boot() {
  announce(*this, mac_, ip_);
  const bool forging = portal_.config().technique == portal::CaptureTechnique::kIpForgery;
  const net::Ipv4Addr self = ip_;
  http_listen(
      net::kHttpPort, [forging, self](net::Ipv4Addr dst) { return forging || dst == self; },
      [this](ConnId id, const net::Decoded<net::HttpMessage>& msg, const ConnInfo& info) {
        on_request(id, msg, info);
      });
  connect_channel();
}

void PortalNode::connect_channel() {
  if (!net_.controller_ip) {
    channel_failed();
    return;
  }
  ++attempts_;
  channel_ = Channel::kConnecting;
  TcpHandlers h;
  h.on_established = [this](ConnId) { channel_up(); };
  h.on_data = [this](ConnId, const std::string& data) {
    replies_.append(data);
    while (auto line = replies_.next()) {
      Attributes a = base_attrs();
      a["dir"] = "rx";
      a["line"] = line->substr(0, line->size() - 1);
      net_.emit(TraceKind::kAuthLine, std::move(a));
      if (awaiting_ack_.empty()) continue;
      Held held = std::move(awaiting_ack_.front());
      awaiting_ack_.pop_front();
      auto reply = auth::decode_reply_line(*line);
      if (reply && reply->status == auth::AuthReply::Status::kOk) {
        http_respond(held.conn, held.response);
      } else {
        refuse(held);
      }
    }
  };
  h.on_closed = [this](ConnId) { channel_failed(); };
  channel_conn_ = tcp_connect(*net_.controller_ip, auth::kAuthPort, std::move(h));
  channel_timer_ = net_.queue.schedule(net_.now() + net_.options.tcp_timeout, name_ + " auth-connect",
                                       [this] {
                                         channel_timer_.reset();
                                         if (channel_ != Channel::kConnecting) return;
                                         tcp_abort(channel_conn_);
                                         host_error("auth-connect-timeout",
                                                    {{"attempt", std::to_string(attempts_)}});
                                         if (attempts_ < 2) {
                                           connect_channel();
                                         } else {
                                           channel_failed();
                                         }
                                       });
}

void PortalNode::channel_up() {
  channel_ = Channel::kUp;
  if (channel_timer_) net_.queue.cancel(*channel_timer_);
  channel_timer_.reset();
  auto pending = std::move(unsent_);
  unsent_.clear();
  for (auto& [cmd, held] : pending) {
    send_command(cmd);
    awaiting_ack_.push_back(std::move(held));
  }
}

void PortalNode::channel_failed() {
  channel_ = Channel::kDown;
  if (channel_timer_) net_.queue.cancel(*channel_timer_);
  channel_timer_.reset();
  auto pending = std::move(unsent_);
  unsent_.clear();
  for (auto& entry : pending) refuse(entry.second);
  auto waiting = std::move(awaiting_ack_);
  awaiting_ack_.clear();
  for (auto& held : waiting) refuse(held);
}

void PortalNode::refuse(const Held& held) {
  portal_.reset_session(held.mac);
  http_respond(held.conn, portal::make_response(503, "AUTH-UNAVAILABLE\n"));
}

void PortalNode::send_command(const auth::AuthCommand& cmd) {
  const std::string line = auth::encode_auth_line(cmd);
  Attributes a = base_attrs();
  a["dir"] = "tx";
  a["line"] = line.substr(0, line.size() - 1);
  net_.emit(TraceKind::kAuthLine, std::move(a));
  tcp_send(channel_conn_, line);
}

void PortalNode::on_request(ConnId id, const net::Decoded<net::HttpMessage>& msg,
                            const ConnInfo& info) {
  auto outcome = portal_.dispatch(info.peer_mac, info.remote_ip, msg);
  if (!outcome.command) {
    http_respond(id, outcome.response);
    return;
  }
  Held held{id, info.peer_mac, std::move(outcome.response)};
  switch (channel_) {
    case Channel::kUp:
      send_command(*outcome.command);
      awaiting_ack_.push_back(std::move(held));
      break;
    case Channel::kConnecting:
      unsent_.emplace_back(*outcome.command, std::move(held));
      break;
    case Channel::kDown:
      refuse(held);
      break;
  }
}

// NAT gateway

NatNode::NatNode(NetworkImpl& net, std::size_t index, const HostSpec& spec)
    : Node(net, index, spec, Role::kNat) {
  for (const auto& site : net.topo.sites) sites_.emplace(site.ip, site.page_body);
  if (const auto* d = std::get_if<dns::mode::Dnat>(&net.services.dns_mode)) rules_ = d->rules;
}

void NatNode::boot() {
  announce(*this, mac_, ip_);
  http_listen(
      net::kHttpPort, [this](net::Ipv4Addr dst) { return sites_.count(dst) != 0; },
      [this](ConnId id, const net::Decoded<net::HttpMessage>& msg, const ConnInfo& info) {
        if (!msg || !std::holds_alternative<net::HttpRequest>(*msg)) {
          http_respond(id, portal::make_response(400, "BAD-REQUEST\n"));
          return;
        }
        http_respond(id, portal::make_response(200, sites_.at(info.local_ip)));
      });
}

void NatNode::on_ipv4(const net::Ipv4Packet& pkt, const net::EthernetFrame& frame) {
  if (!net_.fabric.controller().uplink_permitted(fabric::inspect(frame))) {
    host_error("policy-violation", {{"src", frame.src.str()}, {"ip_dst", pkt.dst.str()}});
    return;
  }
  if (pkt.dst == ip_) {
    if (pkt.protocol == net::kProtoUdp) {
      auto udp = net::decode_udp(pkt.payload);
      auto m = udp ? masq_.find(udp->dst_port) : masq_.end();
      if (m != masq_.end()) {
        net::Ipv4Packet back = pkt;
        back.dst = m->second.first;
        back.payload = net::encode_udp({udp->src_port, m->second.second, udp->payload});
        auto undone = rules_.undo_dnat(std::move(back));
        if (!undone.restored) {
          host_error("no-reverse-state", {{"ip_src", pkt.src.str()}});
        }
        send_ip(std::move(undone.packet));
        return;
      }
    }
    deliver_local(pkt, frame);
    return;
  }
  auto forwarded = rules_.apply_dnat(pkt);
  if (forwarded.rewritten) {
    net::Ipv4Packet out = std::move(forwarded.packet);
    auto udp = net::decode_udp(out.payload);
    if (out.protocol == net::kProtoUdp && udp) {
      const auto client = std::make_pair(out.src, udp->src_port);
      auto known = masq_rev_.find(client);
      std::uint16_t port;
      if (known != masq_rev_.end()) {
        port = known->second;
      } else {
        port = next_masq_++;
        masq_.emplace(port, client);
        masq_rev_.emplace(client, port);
      }
      out.src = ip_;
      out.payload = net::encode_udp({port, udp->dst_port, udp->payload});
    }
    send_ip(std::move(out));
    return;
  }
  if (pkt.protocol == net::kProtoTcp && sites_.count(pkt.dst)) {
    deliver_local(pkt, frame);
    return;
  }
  host_error("no-route", {{"ip_dst", pkt.dst.str()}});
}

// Controller's auth-channel endpoint

ControllerNode::ControllerNode(NetworkImpl& net, std::size_t index, const HostSpec& spec)
    : Node(net, index, spec, Role::kController) {}

void ControllerNode::boot() {
  announce(*this, mac_, ip_);
  if (!net_.options.auth_channel) return;
  net_.queue.schedule(net_.options.controller_listen, name_ + " listen", [this] {
    const net::Ipv4Addr self = ip_;
    tcp_listen(
        auth::kAuthPort, [self](net::Ipv4Addr dst) { return dst == self; },
        [this](ConnId) {
          TcpHandlers h;
          h.on_data = [this](ConnId id, const std::string& data) {
            auto& buf = buffers_[id];
            buf.append(data);
            while (auto line = buf.next()) {
              Attributes rx = base_attrs();
              rx["dir"] = "rx";
              rx["line"] = line->substr(0, line->size() - 1);
              net_.emit(TraceKind::kAuthLine, std::move(rx));
              auto outcome = auth::server_handle_line(net_.fabric, *line);
              net_.emit_fabric_events(outcome.events);
              const std::string reply = auth::encode_auth_line(outcome.reply);
              Attributes tx = base_attrs();
              tx["dir"] = "tx";
              tx["line"] = reply.substr(0, reply.size() - 1);
              net_.emit(TraceKind::kAuthLine, std::move(tx));
              tcp_send(id, reply);
            }
          };
          h.on_closed = [this](ConnId id) { buffers_.erase(id); };
          return h;
        });
  });
}

}  // namespace portalsim::sim
