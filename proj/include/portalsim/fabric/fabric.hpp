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

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "portalsim/fabric/controller.hpp"
#include "portalsim/fabric/flow_table.hpp"

namespace portalsim::fabric {

// Raised for wiring mistakes (a frame on a port the switch does not have).
// These halt a simulation run.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PacketInEvent {
  SwitchId sw;
  PortId in_port;
  FrameFields fields;
};

struct FlowModEvent {
  enum class Op { kAdd, kModify, kRemove };
  SwitchId sw;
  Op op = Op::kAdd;
  FlowEntry entry;
};

struct PacketOutEvent {
  SwitchId sw;
  std::vector<PortId> ports;
  std::optional<net::MacAddr> set_dst_mac;
  bool flood = false;
};

struct DropEvent {
  SwitchId sw;
  PortId in_port;
  std::string reason;
  FrameFields fields;
};

using FabricEvent = std::variant<PacketInEvent, FlowModEvent, PacketOutEvent, DropEvent>;

struct Transmit {
  PortId port;
  net::EthernetFrame frame;
};

struct SwitchResult {
  std::vector<FabricEvent> events;
  std::vector<Transmit> transmits;
};

class Switch {
 public:
  Switch(SwitchId id, std::string name, std::uint16_t port_count)
      : id_(id), name_(std::move(name)), port_count_(port_count) {}

  SwitchId id() const { return id_; }
  const std::string& name() const { return name_; }
  std::uint16_t port_count() const { return port_count_; }
  bool valid_port(PortId port) const { return port.index >= 1 && port.index <= port_count_; }

  // Marks a port as cabled; floods only go out cabled ports.
  void attach(PortId port);
  const std::set<PortId>& attached() const { return attached_; }

  FlowTable& flows() { return flows_; }
  const FlowTable& flows() const { return flows_; }

 private:
  SwitchId id_;
  std::string name_;
  std::uint16_t port_count_;
  std::set<PortId> attached_;
  FlowTable flows_;
};

// Switches plus the controller that programs them.
class Fabric {
 public:
  explicit Fabric(ControllerConfig config = {}) : controller_(std::move(config)) {}

  SwitchId add_switch(std::string name, std::uint16_t port_count);
  Switch& at(SwitchId id) { return switches_.at(id.index); }
  const Switch& at(SwitchId id) const { return switches_.at(id.index); }
  std::size_t size() const { return switches_.size(); }

  Controller& controller() { return controller_; }
  const Controller& controller() const { return controller_; }

  // A table hit is applied directly; a miss goes to the controller and its
  // decision is applied. Throws ConfigError for an invalid ingress port.
  SwitchResult receive(SwitchId sw, PortId in_port, const net::EthernetFrame& frame);

  // Authorizes the MAC and removes every flow matching on it as a source, so
  // its next packet is re-examined. Returns the flow removals.
  std::vector<FabricEvent> authorize_mac(const net::MacAddr& mac);

 private:
  void apply_action(Switch& sw, PortId in_port, const FlowAction& action,
                    const net::EthernetFrame& frame, SwitchResult& out);
  void flood(Switch& sw, PortId in_port, const std::set<PortId>& exclude,
             const net::EthernetFrame& frame, SwitchResult& out);

  std::vector<Switch> switches_;
  Controller controller_;
};

}  // namespace portalsim::fabric
