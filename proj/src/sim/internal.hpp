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

// Simulator internals shared by the node and network translation units.

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "portalsim/auth/line.hpp"
#include "portalsim/dns/engine.hpp"
#include "portalsim/dns/rewrite.hpp"
#include "portalsim/fabric/fabric.hpp"
#include "portalsim/net/dns.hpp"
#include "portalsim/net/ethernet.hpp"
#include "portalsim/net/http.hpp"
#include "portalsim/net/ipv4.hpp"
#include "portalsim/portal/portal.hpp"
#include "portalsim/sim/event_queue.hpp"
#include "portalsim/sim/network.hpp"
#include "portalsim/sim/topology.hpp"
#include "portalsim/sim/trace.hpp"

namespace portalsim::sim {

class Node;

struct Endpoint {
  enum class Kind { kNode, kSwitch };
  Kind kind = Kind::kNode;
  std::size_t node = 0;
  fabric::SwitchId sw;
  fabric::PortId port;
};

struct Link {
  Endpoint a;
  Endpoint b;
  std::uint32_t latency = 1;
};

Attributes frame_attrs(const net::EthernetFrame& frame);
Attributes fields_attrs(const fabric::FrameFields& fields);
Attributes http_attrs(const net::HttpMessage& msg);

struct NetworkImpl {
  NetworkImpl(Topology t, Services s, NetworkOptions o);

  Topology topo;
  Services services;
  NetworkOptions options;
  EventQueue queue;
  Trace trace;
  fabric::Fabric fabric;

  std::vector<std::unique_ptr<Node>> nodes;
  std::map<std::string, std::size_t> node_index;
  std::map<std::string, fabric::SwitchId> switch_index;
  std::vector<Link> links;
  std::map<std::size_t, std::size_t> node_link;
  std::map<std::pair<std::uint32_t, std::uint16_t>, std::size_t> port_link;

  struct InFlight {
    EventQueue::Id event;
    Endpoint to;
    net::EthernetFrame frame;
  };
  std::map<std::uint64_t, InFlight> in_flight;
  std::uint64_t next_flight = 0;
  LinkCounters counters;
  std::vector<ActionResult> results;

  class PortalNode* portal = nullptr;
  std::optional<net::Ipv4Addr> gateway;
  std::optional<net::Ipv4Addr> dns_ip;
  std::optional<net::Ipv4Addr> controller_ip;

  Tick now() const { return queue.now(); }
  void emit(TraceKind kind, Attributes attrs);
  std::string endpoint_name(const Endpoint& e) const;
  void transmit(const Endpoint& from, net::EthernetFrame frame);
  void deliver(const Endpoint& to, const net::EthernetFrame& frame);
  void switch_receive(fabric::SwitchId sw, fabric::PortId port, const net::EthernetFrame& frame);
  void emit_fabric_events(const std::vector<fabric::FabricEvent>& events);
  Node* node(const std::string& name);
};

// One NIC with ARP, IPv4 delivery, UDP dispatch and a minimal TCP.
class Node {
 public:
  Node(NetworkImpl& net, std::size_t index, const HostSpec& spec, Role role);
  virtual ~Node() = default;

  virtual void boot() {}
  void on_frame(const net::EthernetFrame& frame);
  void send_frame(net::EthernetFrame frame);

  const std::string& name() const { return name_; }
  const net::MacAddr& mac() const { return mac_; }
  const net::Ipv4Addr& ip() const { return ip_; }
  Role role() const { return role_; }
  const std::vector<net::EthernetFrame>& accepted() const { return accepted_; }

 protected:
  using ConnId = std::uint64_t;

  struct TcpHandlers {
    std::function<void(ConnId)> on_established;
    std::function<void(ConnId, const std::string&)> on_data;
    std::function<void(ConnId)> on_closed;
  };

  struct ConnInfo {
    net::Ipv4Addr local_ip;
    std::uint16_t local_port;
    net::Ipv4Addr remote_ip;
    std::uint16_t remote_port;
    net::MacAddr peer_mac;
  };

  void send_ip(net::Ipv4Packet pkt);
  void send_udp(net::Ipv4Addr src, std::uint16_t sport, net::Ipv4Addr dst, std::uint16_t dport,
                net::Bytes payload);
  void send_arp(const net::ArpPacket& arp, const net::MacAddr& dst);

  virtual void on_ipv4(const net::Ipv4Packet& pkt, const net::EthernetFrame& frame);
  void deliver_local(const net::Ipv4Packet& pkt, const net::EthernetFrame& frame);
  virtual void on_udp(const net::Ipv4Packet&, const net::UdpDatagram&, const net::EthernetFrame&) {}

  void tcp_listen(std::uint16_t port, std::function<bool(net::Ipv4Addr)> accept_dst,
                  std::function<TcpHandlers(ConnId)> factory);
  void tcp_unlisten(std::uint16_t port) { listeners_.erase(port); }
  ConnId tcp_connect(net::Ipv4Addr dst, std::uint16_t port, TcpHandlers handlers);
  void tcp_send(ConnId id, const std::string& data);
  void tcp_close(ConnId id);
  void tcp_abort(ConnId id);
  std::optional<ConnInfo> tcp_info(ConnId id) const;

  // HTTP server on top of tcp_listen. The handler answers through
  // http_respond, possibly later.
  using HttpHandler =
      std::function<void(ConnId, const net::Decoded<net::HttpMessage>&, const ConnInfo&)>;
  void http_listen(std::uint16_t port, std::function<bool(net::Ipv4Addr)> accept_dst,
                   HttpHandler handler);
  void http_respond(ConnId id, const net::HttpResponse& response);

  std::uint16_t ephemeral_port() { return next_port_++; }
  void host_error(const std::string& code, Attributes extra = {});
  Attributes base_attrs() const;

  NetworkImpl& net_;
  std::size_t index_;
  std::string name_;
  net::MacAddr mac_;
  net::Ipv4Addr ip_;
  Role role_;
  std::map<net::Ipv4Addr, net::MacAddr> arp_cache_;

 private:
  enum class TcpState { kSynSent, kSynReceived, kEstablished };
  using Key = std::tuple<net::Ipv4Addr, std::uint16_t, net::Ipv4Addr, std::uint16_t>;
  struct Conn {
    Key key;
    TcpState state;
    std::uint32_t snd_nxt = 0;
    std::uint32_t rcv_nxt = 0;
    bool fin_sent = false;
    net::MacAddr peer_mac;
    TcpHandlers handlers;
  };
  struct Listener {
    std::function<bool(net::Ipv4Addr)> accept_dst;
    std::function<TcpHandlers(ConnId)> factory;
  };

  void on_arp(const net::ArpPacket& arp);
  void on_tcp(const net::Ipv4Packet& pkt, const net::TcpSegment& seg,
              const net::EthernetFrame& frame);
  void send_segment(Conn& c, net::TcpFlags flags, const std::string& payload);
  void forget(ConnId id);

  std::map<net::Ipv4Addr, std::vector<net::Ipv4Packet>> arp_pending_;
  std::map<ConnId, Conn> conns_;
  std::map<Key, ConnId> by_key_;
  std::map<std::uint16_t, Listener> listeners_;
  std::map<ConnId, std::string> http_buffers_;
  std::vector<net::EthernetFrame> accepted_;
  ConnId next_conn_ = 1;
  std::uint16_t next_port_ = kFirstEphemeralPort;
};

class DnsServerNode : public Node {
 public:
  DnsServerNode(NetworkImpl& net, std::size_t index, const HostSpec& spec);
  void boot() override;

 protected:
  void on_udp(const net::Ipv4Packet& pkt, const net::UdpDatagram& udp,
              const net::EthernetFrame& frame) override;

 private:
  dns::DnsMode genuine_;
  net::DomainName portal_domain_;
};

class PortalNode : public Node {
 public:
  PortalNode(NetworkImpl& net, std::size_t index, const HostSpec& spec);
  void boot() override;
  const portal::Portal& logic() const { return portal_; }

 private:
  enum class Channel { kConnecting, kUp, kDown };
  struct Held {
    ConnId conn;
    net::MacAddr mac;
    net::HttpResponse response;
  };

  void on_request(ConnId id, const net::Decoded<net::HttpMessage>& msg, const ConnInfo& info);
  void connect_channel();
  void channel_up();
  void channel_failed();
  void send_command(const auth::AuthCommand& cmd);
  void refuse(const Held& held);

  portal::Portal portal_;
  Channel channel_ = Channel::kConnecting;
  int attempts_ = 0;
  ConnId channel_conn_ = 0;
  std::optional<EventQueue::Id> channel_timer_;
  auth::LineBuffer replies_;
  std::deque<Held> awaiting_ack_;
  std::deque<std::pair<auth::AuthCommand, Held>> unsent_;
};

class NatNode : public Node {
 public:
  NatNode(NetworkImpl& net, std::size_t index, const HostSpec& spec);
  void boot() override;

 protected:
  void on_ipv4(const net::Ipv4Packet& pkt, const net::EthernetFrame& frame) override;

 private:
  std::map<net::Ipv4Addr, std::string> sites_;
  dns::RewriteRuleSet rules_;
  // masquerade port -> (client ip, client port)
  std::map<std::uint16_t, std::pair<net::Ipv4Addr, std::uint16_t>> masq_;
  std::map<std::pair<net::Ipv4Addr, std::uint16_t>, std::uint16_t> masq_rev_;
  std::uint16_t next_masq_ = 20000;
};

class ControllerNode : public Node {
 public:
  ControllerNode(NetworkImpl& net, std::size_t index, const HostSpec& spec);
  void boot() override;

 private:
  std::map<ConnId, auth::LineBuffer> buffers_;
};

class UserHost : public Node {
 public:
  UserHost(NetworkImpl& net, std::size_t index, const HostSpec& spec);

  void enqueue(ScriptStep step);
  void send_raw(net::EthernetFrame frame) { send_frame(std::move(frame)); }

 protected:
  void on_udp(const net::Ipv4Packet& pkt, const net::UdpDatagram& udp,
              const net::EthernetFrame& frame) override;

 private:
  using Resolved = std::function<void(std::optional<net::Ipv4Addr>, const std::string&)>;
  struct PendingQuery {
    std::uint16_t id;
    net::DomainName name;
    Resolved done;
  };
  struct CacheEntry {
    net::Ipv4Addr addr;
    Tick expires;
  };

  void start_next();
  void run(const ScriptStep& step);
  void finish(bool ok, const std::string& error);
  void fetch(net::HttpMethod method, const std::string& url, const std::string& body);
  void exchange(net::HttpMethod method, const net::HttpUrl& url, net::Ipv4Addr addr,
                const std::string& text, const std::string& body);
  void on_response(const net::HttpResponse& resp, const std::string& url);
  void resolve(const std::string& host, bool use_cache, Resolved done);
  void arm_timer(const std::string& what);
  void cancel_timer();
  bool stale(std::uint64_t gen) const { return gen != gen_ || !busy_; }

  std::optional<net::Ipv4Addr> resolver_;
  std::deque<ScriptStep> script_;
  bool busy_ = false;
  std::uint64_t gen_ = 0;
  ScriptStep current_;
  std::uint32_t runs_left_ = 0;
  ActionResult result_;
  std::uint32_t redirects_left_ = 0;
  std::optional<ConnId> conn_;
  std::string rx_;
  std::optional<EventQueue::Id> timer_;
  std::map<std::uint16_t, PendingQuery> queries_;
  std::map<net::DomainName, CacheEntry> dns_cache_;
  std::optional<std::string> form_action_;
  std::uint16_t next_dns_id_ = 0x1000;
};

}  // namespace portalsim::sim
