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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "portalsim/fabric/fabric.hpp"
#include "portalsim/net/ipv4.hpp"
#include "support/generators.hpp"

namespace portalsim::fabric {
namespace {

using net::EthernetFrame;
using net::Ipv4Addr;
using net::MacAddr;

const MacAddr kA = *MacAddr::parse("aa:bb:cc:dd:ee:01");
const MacAddr kB = *MacAddr::parse("aa:bb:cc:dd:ee:02");
const MacAddr kNat = *MacAddr::parse("02:00:00:00:00:01");
const MacAddr kPortal = *MacAddr::parse("02:00:00:00:00:02");
const Ipv4Addr kPortalIp = *Ipv4Addr::parse("10.0.0.2");
const Ipv4Addr kDnsIp = *Ipv4Addr::parse("10.0.0.3");

EthernetFrame raw(MacAddr src, MacAddr dst) { return {dst, src, 0x88b5, {1, 2, 3}}; }

EthernetFrame ipv4_frame(MacAddr src, MacAddr dst, Ipv4Addr ip_dst, std::uint8_t proto,
                         std::uint16_t dport) {
  net::Ipv4Packet pkt;
  pkt.src = *Ipv4Addr::parse("10.0.0.10");
  pkt.dst = ip_dst;
  pkt.protocol = proto;
  if (proto == net::kProtoUdp) {
    pkt.payload = net::encode_udp({49152, dport, {}});
  } else {
    net::TcpSegment seg;
    seg.src_port = 49152;
    seg.dst_port = dport;
    seg.flags.syn = true;
    pkt.payload = net::encode_tcp(seg);
  }
  return {dst, src, net::kEthertypeIpv4, net::encode_ipv4(pkt)};
}

template <typename T>
std::size_t count_events(const SwitchResult& r) {
  return std::count_if(r.events.begin(), r.events.end(),
                       [](const FabricEvent& e) { return std::holds_alternative<T>(e); });
}

std::set<std::uint16_t> out_ports(const SwitchResult& r) {
  std::set<std::uint16_t> ports;
  for (const auto& t : r.transmits) ports.insert(t.port.index);
  return ports;
}

Fabric single_switch(std::uint16_t ports, ControllerConfig config = {}) {
  Fabric fabric(std::move(config));
  auto id = fabric.add_switch("s1", ports);
  for (std::uint16_t p = 1; p <= ports; ++p) fabric.at(id).attach({p});
  return fabric;
}

// Brute-force reference switch: floods everything out every other port.
std::set<std::uint16_t> oracle_flood(std::uint16_t ports, std::uint16_t in_port) {
  std::set<std::uint16_t> out;
  for (std::uint16_t p = 1; p <= ports; ++p) {
    if (p != in_port) out.insert(p);
  }
  return out;
}

TEST(FlowTableTest, HighestPriorityThenEarliest) {
  FlowTable table;
  FlowMatch any;
  FlowMatch to_b;
  to_b.dst_mac = kB;
  FlowMatch from_a;
  from_a.src_mac = kA;
  EXPECT_EQ(table.install({any, 1, action::Flood{}}), InstallResult::kAdded);
  EXPECT_EQ(table.install({to_b, 10, action::Output{{2}}}), InstallResult::kAdded);
  EXPECT_EQ(table.install({from_a, 10, action::Output{{3}}}), InstallResult::kAdded);
  auto fields = inspect(raw(kA, kB));
  ASSERT_NE(table.lookup({1}, fields), nullptr);
  EXPECT_EQ(table.lookup({1}, fields)->action, FlowAction{action::Output{{2}}});
  EXPECT_EQ(table.install({to_b, 10, action::Output{{4}}}), InstallResult::kModified);
  EXPECT_EQ(table.install({to_b, 10, action::Output{{4}}}), InstallResult::kUnchanged);
  EXPECT_EQ(table.size(), 3u);
  // Replacement keeps its original position, so it still wins the tie.
  EXPECT_EQ(table.lookup({1}, fields)->action, FlowAction{action::Output{{4}}});
  EXPECT_EQ(table.lookup({1}, inspect(raw(kB, kA)))->action, FlowAction{action::Flood{}});
}

TEST(FlowTableTest, MatchValidity) {
  FlowMatch m;
  m.l4_dst_port = 53;
  EXPECT_FALSE(m.valid());
  m.ethertype = net::kEthertypeIpv4;
  EXPECT_TRUE(m.valid());
  EXPECT_EQ(m.str(), "type=0x0800,l4_dst=53");
}

TEST(SwitchTest, EmptyTableSendsExactlyOnePacketIn) {
  testing::Gen gen(11);
  for (int i = 0; i < 50; ++i) {
    Fabric fabric = single_switch(4);
    auto r = fabric.receive({0}, {static_cast<std::uint16_t>(gen.uniform(1, 4))}, gen.frame());
    EXPECT_EQ(count_events<PacketInEvent>(r), 1u);
  }
}

TEST(SwitchTest, TableHitBypassesController) {
  Fabric fabric = single_switch(3);
  FlowMatch m;
  m.dst_mac = kB;
  fabric.at({0}).flows().install({m, 10, action::Output{{2}}});
  auto r = fabric.receive({0}, {1}, raw(kA, kB));
  EXPECT_EQ(count_events<PacketInEvent>(r), 0u);
  EXPECT_EQ(out_ports(r), (std::set<std::uint16_t>{2}));
}

TEST(SwitchTest, FloodExcludesIngress) {
  Fabric fabric = single_switch(3);
  auto r = fabric.receive({0}, {2}, raw(kA, MacAddr::broadcast()));
  EXPECT_EQ(out_ports(r), (std::set<std::uint16_t>{1, 3}));
}

TEST(SwitchTest, FloodSkipsUncabledPorts) {
  Fabric fabric;
  auto id = fabric.add_switch("s1", 4);
  fabric.at(id).attach({1});
  fabric.at(id).attach({3});
  auto r = fabric.receive(id, {1}, raw(kA, MacAddr::broadcast()));
  EXPECT_EQ(out_ports(r), (std::set<std::uint16_t>{3}));
}

TEST(SwitchTest, InvalidPortIsConfigError) {
  Fabric fabric = single_switch(2);
  EXPECT_THROW(fabric.receive({0}, {3}, raw(kA, kB)), ConfigError);
  EXPECT_THROW(fabric.receive({0}, {0}, raw(kA, kB)), ConfigError);
  EXPECT_THROW(fabric.at({0}).attach({9}), ConfigError);
}

TEST(ControllerTest, UnknownDestinationFloodsWithoutFlowForIt) {
  Fabric fabric = single_switch(3);
  auto r = fabric.receive({0}, {1}, raw(kA, kB));
  EXPECT_EQ(fabric.controller().learned_port({0}, kA), PortId{1});
  EXPECT_EQ(out_ports(r), (std::set<std::uint16_t>{2, 3}));
  EXPECT_EQ(fabric.at({0}).flows().size(), 0u);
}

TEST(ControllerTest, ReplyLearnsAndUnicasts) {
  constexpr std::uint16_t kPorts = 3;
  Fabric fabric = single_switch(kPorts);
  auto first = fabric.receive({0}, {1}, raw(kA, kB));
  EXPECT_EQ(out_ports(first), oracle_flood(kPorts, 1));

  auto reply = fabric.receive({0}, {3}, raw(kB, kA));
  EXPECT_EQ(count_events<PacketInEvent>(reply), 1u);
  EXPECT_EQ(fabric.controller().learned_port({0}, kB), PortId{3});
  // The oracle reaches A among its flood set; the learning switch reaches only A.
  const auto oracle = oracle_flood(kPorts, 3);
  EXPECT_TRUE(oracle.count(1));
  EXPECT_EQ(out_ports(reply), (std::set<std::uint16_t>{1}));
  EXPECT_EQ(count_events<FlowModEvent>(reply), 2u);
  const auto* to_a = fabric.at({0}).flows().lookup({3}, inspect(raw(kB, kA)));
  ASSERT_NE(to_a, nullptr);
  EXPECT_EQ(to_a->action, FlowAction{action::Output{{1}}});

  // Converged: A -> B now needs neither the controller nor a flood.
  auto again = fabric.receive({0}, {1}, raw(kA, kB));
  EXPECT_EQ(count_events<PacketInEvent>(again), 0u);
  EXPECT_EQ(out_ports(again), (std::set<std::uint16_t>{3}));
}

ControllerConfig portal_config(bool steer = false) {
  ControllerConfig c;
  c.nat_mac = kNat;
  c.dns_ip = kDnsIp;
  c.portal_ip = kPortalIp;
  c.portal_mac = kPortal;
  c.steer_http_to_portal = steer;
  return c;
}

// Port 1: user A, port 2: NAT, port 3: portal, port 4: user B.
Fabric captive_switch(bool steer = false) {
  Fabric fabric = single_switch(4, portal_config(steer));
  fabric.receive({0}, {2}, raw(kNat, MacAddr::broadcast()));
  fabric.receive({0}, {3}, raw(kPortal, MacAddr::broadcast()));
  return fabric;
}

const Ipv4Addr kUpstream = *Ipv4Addr::parse("93.184.216.34");

TEST(ControllerPolicyTest, UnauthorizedUpstreamIsDroppedWithoutFlow) {
  Fabric fabric = captive_switch();
  auto r = fabric.receive({0}, {1}, ipv4_frame(kA, kNat, kUpstream, net::kProtoTcp, 80));
  EXPECT_TRUE(r.transmits.empty());
  ASSERT_EQ(count_events<DropEvent>(r), 1u);
  for (const auto& e : fabric.at({0}).flows().entries()) {
    EXPECT_FALSE(e.match.dst_mac == kNat && e.match.src_mac == kA);
  }
  // Still dropped on a second try: nothing was cached.
  auto again = fabric.receive({0}, {1}, ipv4_frame(kA, kNat, kUpstream, net::kProtoTcp, 80));
  EXPECT_EQ(count_events<PacketInEvent>(again), 1u);
  EXPECT_TRUE(again.transmits.empty());
}

TEST(ControllerPolicyTest, WalledGardenPasses) {
  Fabric fabric = captive_switch();
  auto dns = fabric.receive({0}, {1},
                            ipv4_frame(kA, kNat, *Ipv4Addr::parse("8.8.8.8"), net::kProtoUdp, 53));
  EXPECT_EQ(out_ports(dns), (std::set<std::uint16_t>{2}));
  auto portal = fabric.receive({0}, {1}, ipv4_frame(kA, kNat, kPortalIp, net::kProtoTcp, 80));
  EXPECT_EQ(out_ports(portal), (std::set<std::uint16_t>{2}));
  net::ArpPacket arp = net::ArpPacket::reply(kA, *Ipv4Addr::parse("10.0.0.10"), kNat,
                                             *Ipv4Addr::parse("10.0.0.1"));
  auto arp_out = fabric.receive({0}, {1}, {kNat, kA, net::kEthertypeArp, net::encode_arp(arp)});
  EXPECT_EQ(out_ports(arp_out), (std::set<std::uint16_t>{2}));
}

TEST(ControllerPolicyTest, AuthorizeThenResendReachesNat) {
  Fabric fabric = captive_switch();
  auto frame = ipv4_frame(kA, kNat, kUpstream, net::kProtoTcp, 80);
  EXPECT_TRUE(fabric.receive({0}, {1}, frame).transmits.empty());
  fabric.authorize_mac(kA);
  auto r = fabric.receive({0}, {1}, frame);
  EXPECT_EQ(out_ports(r), (std::set<std::uint16_t>{2}));
  // Now cached as a source-specific flow.
  auto cached = fabric.receive({0}, {1}, frame);
  EXPECT_EQ(count_events<PacketInEvent>(cached), 0u);
  EXPECT_EQ(out_ports(cached), (std::set<std::uint16_t>{2}));
  // B is still captive even though a flow toward the NAT exists for A.
  fabric.receive({0}, {4}, raw(kB, MacAddr::broadcast()));
  auto other = fabric.receive({0}, {4}, ipv4_frame(kB, kNat, kUpstream, net::kProtoTcp, 80));
  EXPECT_TRUE(other.transmits.empty());
}

TEST(ControllerPolicyTest, AuthorizeRemovesSourceFlows) {
  Fabric fabric = captive_switch();
  fabric.receive({0}, {1}, raw(kA, MacAddr::broadcast()));
  const auto before = fabric.at({0}).flows().size();
  ASSERT_GT(before, 0u);
  auto events = fabric.authorize_mac(kA);
  EXPECT_FALSE(events.empty());
  for (const auto& e : fabric.at({0}).flows().entries()) EXPECT_NE(e.match.src_mac, kA);
  // Idempotent: a second authorization changes nothing.
  const auto flows = fabric.at({0}).flows().entries();
  EXPECT_TRUE(fabric.authorize_mac(kA).empty());
  EXPECT_EQ(fabric.at({0}).flows().entries(), flows);
  EXPECT_EQ(fabric.controller().auth_table().authorized_count(), 1u);
}

TEST(ControllerPolicyTest, AuthorizedUnknownMacStillLearns) {
  Fabric fabric = captive_switch();
  fabric.authorize_mac(kB);
  auto r = fabric.receive({0}, {4}, raw(kB, kA));
  EXPECT_EQ(fabric.controller().learned_port({0}, kB), PortId{4});
  EXPECT_EQ(count_events<PacketInEvent>(r), 1u);
}

TEST(ControllerPolicyTest, CaptiveFloodAvoidsUplink) {
  Fabric fabric = captive_switch();
  const MacAddr unknown = *MacAddr::parse("aa:bb:cc:dd:ee:99");
  auto r = fabric.receive({0}, {1}, ipv4_frame(kA, unknown, kUpstream, net::kProtoTcp, 80));
  EXPECT_EQ(out_ports(r), (std::set<std::uint16_t>{3, 4}));
  // DNS may be flooded anywhere.
  auto dns = fabric.receive({0}, {1}, ipv4_frame(kA, unknown, kUpstream, net::kProtoUdp, 53));
  EXPECT_EQ(out_ports(dns), (std::set<std::uint16_t>{2, 3, 4}));
}

TEST(ControllerPolicyTest, ForgerySteersHttpToPortal) {
  Fabric fabric = captive_switch(/*steer=*/true);
  auto r = fabric.receive({0}, {1}, ipv4_frame(kA, kNat, kUpstream, net::kProtoTcp, 80));
  ASSERT_EQ(r.transmits.size(), 1u);
  EXPECT_EQ(r.transmits[0].port, PortId{3});
  EXPECT_EQ(r.transmits[0].frame.dst, kPortal);
  // Other ports are still dropped.
  auto ssh = fabric.receive({0}, {1}, ipv4_frame(kA, kNat, kUpstream, net::kProtoTcp, 22));
  EXPECT_TRUE(ssh.transmits.empty());
}

TEST(ControllerPolicyTest, ForgeryWithoutKnownPortalDrops) {
  Fabric fabric = single_switch(4, portal_config(true));
  fabric.receive({0}, {2}, raw(kNat, MacAddr::broadcast()));
  auto r = fabric.receive({0}, {1}, ipv4_frame(kA, kNat, kUpstream, net::kProtoTcp, 80));
  EXPECT_TRUE(r.transmits.empty());
  ASSERT_EQ(count_events<DropEvent>(r), 1u);
}

// On one switch, once two hosts have each sent anything, traffic between them
// is handled entirely by the table.
TEST(ControllerPropertyTest, SingleSwitchConvergence) {
  testing::Gen gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ports = static_cast<std::uint16_t>(gen.uniform(2, 8));
    Fabric fabric = single_switch(ports);
    std::vector<MacAddr> macs(ports);
    for (auto& m : macs) m = gen.mac();
    std::set<std::size_t> spoken;
    for (int step = 0; step < 60; ++step) {
      const auto s = gen.uniform(0, ports - 1);
      auto d = gen.uniform(0, ports - 1);
      if (d == s) d = (d + 1) % ports;
      const PortId in{static_cast<std::uint16_t>(s + 1)};
      auto r = fabric.receive({0}, in, raw(macs[s], macs[d]));
      for (const auto& t : r.transmits) ASSERT_NE(t.port, in);
      if (spoken.count(s) && spoken.count(d)) {
        ASSERT_EQ(count_events<PacketInEvent>(r), 0u);
        ASSERT_EQ(out_ports(r), (std::set<std::uint16_t>{static_cast<std::uint16_t>(d + 1)}));
      } else {
        // Whatever happens, the destination's port is among the outputs.
        ASSERT_TRUE(out_ports(r).count(static_cast<std::uint16_t>(d + 1)));
      }
      spoken.insert(s);
    }
  }
}

}  // namespace
}  // namespace portalsim::fabric
