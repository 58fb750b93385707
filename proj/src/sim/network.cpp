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

#include <sstream>
#include <stdexcept>

#include "internal.hpp"

namespace portalsim::sim {

namespace {

std::string port_list(const std::vector<fabric::PortId>& ports) {
  std::string s;
  for (auto p : ports) {
    if (!s.empty()) s += ',';
    s += std::to_string(p.index);
  }
  return s.empty() ? "-" : s;
}

std::string_view op_name(fabric::FlowModEvent::Op op) {
  switch (op) {
    case fabric::FlowModEvent::Op::kAdd: return "add";
    case fabric::FlowModEvent::Op::kModify: return "modify";
    case fabric::FlowModEvent::Op::kRemove: return "remove";
  }
  return "?";
}

fabric::ControllerConfig controller_config(const Topology& t, const Services& s) {
  fabric::ControllerConfig c;
  if (const auto* nat = t.server(t.servers.nat)) c.nat_mac = nat->mac;
  if (const auto* dns = t.server(t.servers.dns)) {
    c.dns_ip = dns->ip;
    c.trusted.insert(dns->mac);
  }
  if (const auto* portal = t.server(t.servers.portal)) {
    c.portal_ip = portal->ip;
    c.portal_mac = portal->mac;
    c.trusted.insert(portal->mac);
  }
  if (const auto* ctrl = t.server(t.servers.controller)) c.trusted.insert(ctrl->mac);
  c.steer_http_to_portal = s.technique == portal::CaptureTechnique::kIpForgery;
  return c;
}

const Topology& validated(const Topology& t) {
  validate(t);
  return t;
}

}  // namespace

std::string RunResult::diagnostic() const {
  if (idle) return "idle at tick " + std::to_string(now);
  std::ostringstream out;
  out << "livelock: tick budget exhausted at tick " << now << " with " << pending.size()
      << " pending event(s)";
  for (const auto& [tick, label] : pending) out << "\n  @" << tick << " " << label;
  return out.str();
}

NetworkImpl::NetworkImpl(Topology t, Services s, NetworkOptions o)
    : topo(validated(t)),
      services(std::move(s)),
      options(o),
      fabric(controller_config(topo, services)) {
  for (const auto& sw : topo.switches) {
    switch_index.emplace(sw.name, fabric.add_switch(sw.name, sw.port_count));
  }
  if (const auto* nat = topo.server(topo.servers.nat)) gateway = nat->ip;
  if (const auto* d = topo.server(topo.servers.dns)) dns_ip = d->ip;
  if (const auto* c = topo.server(topo.servers.controller)) controller_ip = c->ip;

  for (const auto& h : topo.hosts) {
    const std::size_t idx = nodes.size();
    std::unique_ptr<Node> node;
    switch (topo.role_of(h.name)) {
      case Role::kDns: node = std::make_unique<DnsServerNode>(*this, idx, h); break;
      case Role::kPortal: {
        auto p = std::make_unique<PortalNode>(*this, idx, h);
        portal = p.get();
        node = std::move(p);
        break;
      }
      case Role::kNat: node = std::make_unique<NatNode>(*this, idx, h); break;
      case Role::kController: node = std::make_unique<ControllerNode>(*this, idx, h); break;
      case Role::kUser: node = std::make_unique<UserHost>(*this, idx, h); break;
    }
    node_index.emplace(h.name, idx);
    nodes.push_back(std::move(node));
  }

  auto endpoint = [this](const LinkEnd& end) {
    Endpoint e;
    if (auto sw = switch_index.find(end.node); sw != switch_index.end()) {
      e.kind = Endpoint::Kind::kSwitch;
      e.sw = sw->second;
      e.port = fabric::PortId{*end.port};
      fabric.at(e.sw).attach(e.port);
    } else {
      e.kind = Endpoint::Kind::kNode;
      e.node = node_index.at(end.node);
    }
    return e;
  };
  for (const auto& spec : topo.links) {
    Link link{endpoint(spec.a), endpoint(spec.b), spec.latency};
    const std::size_t li = links.size();
    for (const Endpoint* e : {&link.a, &link.b}) {
      if (e->kind == Endpoint::Kind::kNode) {
        node_link.emplace(e->node, li);
      } else {
        port_link.emplace(std::make_pair(e->sw.index, e->port.index), li);
      }
    }
    links.push_back(link);
  }

  for (auto& n : nodes) {
    Node* raw = n.get();
    queue.schedule(0, raw->name() + " boot", [raw] { raw->boot(); });
  }
}

void NetworkImpl::emit(TraceKind kind, Attributes attrs) {
  trace.push_back(TraceEvent{now(), kind, std::move(attrs)});
}

std::string NetworkImpl::endpoint_name(const Endpoint& e) const {
  if (e.kind == Endpoint::Kind::kNode) return nodes.at(e.node)->name();
  return fabric.at(e.sw).name() + ":" + std::to_string(e.port.index);
}

Node* NetworkImpl::node(const std::string& name) {
  auto it = node_index.find(name);
  return it == node_index.end() ? nullptr : nodes[it->second].get();
}

void NetworkImpl::transmit(const Endpoint& from, net::EthernetFrame frame) {
  std::optional<std::size_t> li;
  if (from.kind == Endpoint::Kind::kNode) {
    if (auto it = node_link.find(from.node); it != node_link.end()) li = it->second;
  } else {
    auto it = port_link.find({from.sw.index, from.port.index});
    if (it != port_link.end()) li = it->second;
  }
  Attributes a = frame_attrs(frame);
  a["at"] = endpoint_name(from);
  if (!li) {
    a["reason"] = "no-link";
    emit(TraceKind::kDrop, std::move(a));
    return;
  }
  const Link& link = links[*li];
  const bool from_a = link.a.kind == from.kind && endpoint_name(link.a) == endpoint_name(from);
  const Endpoint to = from_a ? link.b : link.a;
  emit(TraceKind::kFrameTx, std::move(a));
  ++counters.enqueued;
  const std::uint64_t flight = next_flight++;
  const auto id = queue.schedule(now() + link.latency, "deliver to " + endpoint_name(to),
                                 [this, flight] {
                                   auto it = in_flight.find(flight);
                                   InFlight f = std::move(it->second);
                                   in_flight.erase(it);
                                   ++counters.delivered;
                                   deliver(f.to, f.frame);
                                 });
  in_flight.emplace(flight, InFlight{id, to, std::move(frame)});
}

void NetworkImpl::deliver(const Endpoint& to, const net::EthernetFrame& frame) {
  Attributes a = frame_attrs(frame);
  a["at"] = endpoint_name(to);
  emit(TraceKind::kFrameRx, std::move(a));
  if (to.kind == Endpoint::Kind::kNode) {
    nodes.at(to.node)->on_frame(frame);
  } else {
    switch_receive(to.sw, to.port, frame);
  }
}

void NetworkImpl::emit_fabric_events(const std::vector<fabric::FabricEvent>& events) {
  for (const auto& ev : events) {
    if (const auto* pin = std::get_if<fabric::PacketInEvent>(&ev)) {
      Attributes a = fields_attrs(pin->fields);
      a["sw"] = fabric.at(pin->sw).name();
      a["in_port"] = std::to_string(pin->in_port.index);
      emit(TraceKind::kPacketIn, std::move(a));
    } else if (const auto* mod = std::get_if<fabric::FlowModEvent>(&ev)) {
      emit(TraceKind::kFlowMod, {{"sw", fabric.at(mod->sw).name()},
                                 {"op", std::string(op_name(mod->op))},
                                 {"match", mod->entry.match.str()},
                                 {"priority", std::to_string(mod->entry.priority)},
                                 {"action", fabric::to_string(mod->entry.action)}});
    } else if (const auto* out = std::get_if<fabric::PacketOutEvent>(&ev)) {
      Attributes a{{"sw", fabric.at(out->sw).name()},
                   {"ports", port_list(out->ports)},
                   {"flood", out->flood ? "yes" : "no"}};
      if (out->set_dst_mac) a["set_dst"] = out->set_dst_mac->str();
      emit(TraceKind::kPacketOut, std::move(a));
    } else if (const auto* drop = std::get_if<fabric::DropEvent>(&ev)) {
      Attributes a = fields_attrs(drop->fields);
      a["sw"] = fabric.at(drop->sw).name();
      a["in_port"] = std::to_string(drop->in_port.index);
      a["reason"] = drop->reason;
      emit(TraceKind::kDrop, std::move(a));
    }
  }
}

void NetworkImpl::switch_receive(fabric::SwitchId sw, fabric::PortId port,
                                 const net::EthernetFrame& frame) {
  auto result = fabric.receive(sw, port, frame);
  emit_fabric_events(result.events);
  for (auto& t : result.transmits) {
    Endpoint from;
    from.kind = Endpoint::Kind::kSwitch;
    from.sw = sw;
    from.port = t.port;
    transmit(from, std::move(t.frame));
  }
}

// Network

Network::Network(Topology topology, Services services, NetworkOptions options)
    : impl_(std::make_unique<NetworkImpl>(std::move(topology), std::move(services), options)) {}

Network::~Network() = default;

void Network::schedule(ScriptStep step) {
  auto* node = dynamic_cast<UserHost*>(impl_->node(step.host));
  if (!node) throw std::invalid_argument("no user host named '" + step.host + "'");
  node->enqueue(std::move(step));
}

RunResult Network::run_until_idle(Tick budget) {
  auto& q = impl_->queue;
  const Tick limit = q.now() + budget;
  while (auto due = q.next_due()) {
    if (*due > limit) break;
    q.step();
  }
  RunResult r;
  r.now = q.now();
  if (q.empty()) return r;
  r.idle = false;
  r.pending = q.summary(8);
  // Frames still on a wire are lost with the run.
  for (auto& [flight, f] : impl_->in_flight) {
    q.cancel(f.event);
    ++impl_->counters.dropped;
    Attributes a = frame_attrs(f.frame);
    a["at"] = impl_->endpoint_name(f.to);
    a["reason"] = "budget";
    impl_->emit(TraceKind::kDrop, std::move(a));
  }
  impl_->in_flight.clear();
  return r;
}

ActionResult Network::http_get(const std::string& host, const std::string& url,
                               std::uint32_t max_redirects, Tick budget) {
  const std::size_t before = impl_->results.size();
  HttpGetAction get;
  get.url = url;
  get.max_redirects = max_redirects;
  schedule(ScriptStep{impl_->queue.now(), host, get});
  run_until_idle(budget);
  for (std::size_t i = impl_->results.size(); i > before; --i) {
    if (impl_->results[i - 1].host == host) return impl_->results[i - 1];
  }
  ActionResult r;
  r.host = host;
  r.action = describe(get);
  r.error = "unfinished";
  return r;
}

void Network::send_raw(const std::string& host, net::EthernetFrame frame, Tick at) {
  auto* node = impl_->node(host);
  if (!node) throw std::invalid_argument("no host named '" + host + "'");
  impl_->queue.schedule(at, host + " raw", [node, frame] { node->send_frame(frame); });
}

Tick Network::now() const { return impl_->queue.now(); }
const Trace& Network::trace() const { return impl_->trace; }
std::string Network::trace_text() const { return format_trace(impl_->trace); }
const std::vector<ActionResult>& Network::results() const { return impl_->results; }
const Topology& Network::topology() const { return impl_->topo; }
fabric::Fabric& Network::fabric() { return impl_->fabric; }
const fabric::Fabric& Network::fabric() const { return impl_->fabric; }
const portal::Portal* Network::portal() const {
  return impl_->portal ? &impl_->portal->logic() : nullptr;
}
LinkCounters Network::counters() const { return impl_->counters; }

const std::vector<net::EthernetFrame>& Network::accepted(const std::string& host) const {
  auto* node = impl_->node(host);
  if (!node) throw std::invalid_argument("no host named '" + host + "'");
  return node->accepted();
}

}  // namespace portalsim::sim
