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

#include "portalsim/fabric/fabric.hpp"

namespace portalsim::fabric {

void Switch::attach(PortId port) {
  if (!valid_port(port)) {
    throw ConfigError("switch " + name_ + " has no port " + std::to_string(port.index));
  }
  attached_.insert(port);
}

SwitchId Fabric::add_switch(std::string name, std::uint16_t port_count) {
  const SwitchId id{static_cast<std::uint32_t>(switches_.size())};
  switches_.emplace_back(id, std::move(name), port_count);
  return id;
}

void Fabric::flood(Switch& sw, PortId in_port, const std::set<PortId>& exclude,
                   const net::EthernetFrame& frame, SwitchResult& out) {
  for (PortId port : sw.attached()) {
    if (port == in_port || exclude.count(port)) continue;
    out.transmits.push_back({port, frame});
  }
}

void Fabric::apply_action(Switch& sw, PortId in_port, const FlowAction& act,
                          const net::EthernetFrame& frame, SwitchResult& out) {
  if (const auto* o = std::get_if<action::Output>(&act)) {
    if (o->port == in_port) {
      out.events.push_back(DropEvent{sw.id(), in_port, "same-port", inspect(frame)});
    } else {
      out.transmits.push_back({o->port, frame});
    }
  } else if (std::holds_alternative<action::Flood>(act)) {
    flood(sw, in_port, {}, frame, out);
  } else if (std::holds_alternative<action::Drop>(act)) {
    out.events.push_back(DropEvent{sw.id(), in_port, "flow-drop", inspect(frame)});
  }
}

SwitchResult Fabric::receive(SwitchId id, PortId in_port, const net::EthernetFrame& frame) {
  Switch& sw = at(id);
  if (!sw.valid_port(in_port)) {
    throw ConfigError("frame arrived on invalid port " + std::to_string(in_port.index) +
                      " of switch " + sw.name());
  }
  SwitchResult out;
  const FrameFields fields = inspect(frame);
  const FlowEntry* hit = sw.flows().lookup(in_port, fields);
  if (hit && !std::holds_alternative<action::ToController>(hit->action)) {
    apply_action(sw, in_port, hit->action, frame, out);
    return out;
  }

  out.events.push_back(PacketInEvent{id, in_port, fields});
  ControllerDecision decision = controller_.packet_in(id, in_port, frame);
  for (auto& entry : decision.installs) {
    const InstallResult result = sw.flows().install(entry);
    if (result == InstallResult::kUnchanged) continue;
    out.events.push_back(FlowModEvent{
        id, result == InstallResult::kAdded ? FlowModEvent::Op::kAdd : FlowModEvent::Op::kModify,
        std::move(entry)});
  }
  if (decision.drop_reason) {
    out.events.push_back(DropEvent{id, in_port, *decision.drop_reason, fields});
    return out;
  }
  if (!decision.packet_out) return out;

  const PacketOut& po = *decision.packet_out;
  net::EthernetFrame outgoing = frame;
  if (po.set_dst_mac) outgoing.dst = *po.set_dst_mac;
  SwitchResult sent;
  if (po.port) {
    apply_action(sw, in_port, action::Output{*po.port}, outgoing, sent);
  } else {
    flood(sw, in_port, po.exclude, outgoing, sent);
  }
  PacketOutEvent event{id, {}, po.set_dst_mac, !po.port.has_value()};
  for (const auto& t : sent.transmits) event.ports.push_back(t.port);
  out.events.push_back(std::move(event));
  out.events.insert(out.events.end(), sent.events.begin(), sent.events.end());
  out.transmits = std::move(sent.transmits);
  return out;
}

std::vector<FabricEvent> Fabric::authorize_mac(const net::MacAddr& mac) {
  std::vector<FabricEvent> events;
  if (!controller_.authorize_mac(mac)) return events;
  for (auto& sw : switches_) {
    auto removed = sw.flows().remove_if(
        [&](const FlowEntry& e) { return e.match.src_mac && *e.match.src_mac == mac; });
    for (auto& entry : removed) {
      events.push_back(FlowModEvent{sw.id(), FlowModEvent::Op::kRemove, std::move(entry)});
    }
  }
  return events;
}

}  // namespace portalsim::fabric
