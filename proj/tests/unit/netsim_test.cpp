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

#include <set>

#include "portalsim/sim/network.hpp"
#include "support/fig1.hpp"
#include "support/generators.hpp"

namespace portalsim::sim {
namespace {

using portal::CaptureTechnique;
using testing::default_sites;
using testing::fig1_with_sites;
using testing::services_for;

net::Ipv4Addr ip(const char* text) { return *net::Ipv4Addr::parse(text); }

std::size_t count_kind(const Trace& t, TraceKind kind) {
  std::size_t n = 0;
  for (const auto& e : t) n += e.kind == kind;
  return n;
}

bool has_error(const Trace& t, const std::string& code) {
  for (const auto& e : t) {
    if (e.kind == TraceKind::kHostError && e.value("error") == code) return true;
  }
  return false;
}

// Event queue

TEST(EventQueueTest, PopsByDueThenInsertion) {
  EventQueue q;
  std::vector<int> order;
  q.schedule(5, "a", [&] { order.push_back(1); });
  q.schedule(2, "b", [&] { order.push_back(2); });
  q.schedule(5, "c", [&] { order.push_back(3); });
  q.schedule(2, "d", [&] { order.push_back(4); });
  while (q.step()) {
  }
  EXPECT_EQ(order, (std::vector<int>{2, 4, 1, 3}));
  EXPECT_EQ(q.now(), 5u);
}

TEST(EventQueueTest, CancelAndPastDue) {
  EventQueue q;
  int ran = 0;
  auto id = q.schedule(3, "x", [&] { ++ran; });
  q.schedule(4, "y", [&] {
    q.schedule(1, "late", [&] { ran += 10; });
  });
  EXPECT_TRUE(q.cancel(id));
  EXPECT_FALSE(q.cancel(id));
  while (q.step()) {
  }
  EXPECT_EQ(ran, 10);
  EXPECT_EQ(q.now(), 4u);
}

TEST(EventQueueTest, SummaryInPopOrder) {
  EventQueue q;
  q.schedule(9, "later", [] {});
  q.schedule(1, "soon", [] {});
  auto s = q.summary(5);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].second, "soon");
  EXPECT_EQ(s[1].first, 9u);
}

// Trace format

TEST(TraceTest, FormatIsSortedAndEscaped) {
  TraceEvent e{7, TraceKind::kAuthLine, {{"line", "AUTH aa:bb:cc:dd:ee:01"}, {"at", "portal"}}};
  EXPECT_EQ(format_event(e), "7 AuthLine at=portal line=AUTH%20aa:bb:cc:dd:ee:01");
}

TEST(TraceTest, EscapeRoundTripsArbitraryBytes) {
  testing::Gen g(11);
  for (int i = 0; i < 500; ++i) {
    auto raw = g.bytes(40);
    std::string s(raw.begin(), raw.end());
    auto esc = escape_value(s);
    EXPECT_EQ(esc.find_first_of(" =\n\r\t"), std::string::npos);
    EXPECT_EQ(unescape_value(esc), s);
  }
}

TEST(TraceTest, TraceRoundTrip) {
  testing::Gen g(12);
  Trace t;
  for (int i = 0; i < 200; ++i) {
    TraceEvent e;
    e.tick = g.uniform(0, 1000000);
    e.kind = static_cast<TraceKind>(g.uniform(0, 10));
    const auto n = g.uniform(0, 5);
    for (std::uint64_t k = 0; k < n; ++k) {
      auto raw = g.bytes(12);
      e.attrs[g.alnum(1, 6)] = std::string(raw.begin(), raw.end());
    }
    t.push_back(std::move(e));
  }
  auto text = format_trace(t);
  auto back = parse_trace(text);
  ASSERT_TRUE(back) << back.error().message();
  EXPECT_EQ(*back, t);
  EXPECT_EQ(format_trace(*back), text);
}

TEST(TraceTest, ParseErrors) {
  EXPECT_FALSE(parse_trace("portaltrace/2\n"));
  EXPECT_FALSE(parse_trace("0 FrameTx a=1\n"));
  auto bad = parse_trace("portaltrace/1\n0 FrameTx a=1\n1 Bogus a=1\n");
  ASSERT_FALSE(bad);
  EXPECT_EQ(bad.error().line, 3u);
  EXPECT_FALSE(parse_event("0 FrameTx b=1 a=2"));
  EXPECT_FALSE(parse_event("x FrameTx a=1"));
  EXPECT_FALSE(parse_event("0 FrameTx a"));
  EXPECT_FALSE(parse_event("0 FrameTx a=%zz"));
  EXPECT_TRUE(parse_trace("portaltrace/1\n"));
}

// Topology

TEST(TopologyTest, Fig1Shape) {
  auto topo = fig1_topology(2);
  EXPECT_NO_THROW(validate(topo));
  EXPECT_EQ(topo.switches.size(), 2u);
  EXPECT_GE(topo.hosts.size(), 5u);
  EXPECT_EQ(topo.role_of("user1"), Role::kUser);
  EXPECT_EQ(topo.role_of(*topo.servers.dns), Role::kDns);
  EXPECT_EQ(topo.role_of(*topo.servers.portal), Role::kPortal);
  EXPECT_EQ(topo.role_of(*topo.servers.nat), Role::kNat);
}

BuildErrorCode build_error(const Topology& t) {
  try {
    validate(t);
  } catch (const BuildError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no build error";
  return BuildErrorCode::kDuplicateName;
}

TEST(TopologyTest, DuplicateIpNamesTheAddress) {
  auto topo = fig1_topology(2);
  topo.hosts[1].ip = topo.hosts[0].ip;
  try {
    validate(topo);
    FAIL();
  } catch (const BuildError& e) {
    EXPECT_EQ(e.code(), BuildErrorCode::kDuplicateIp);
    EXPECT_NE(std::string(e.what()).find(topo.hosts[0].ip.str()), std::string::npos);
  }
}

TEST(TopologyTest, DistinctBuildErrors) {
  auto mac = fig1_topology(2);
  mac.hosts[1].mac = mac.hosts[0].mac;
  EXPECT_EQ(build_error(mac), BuildErrorCode::kDuplicateMac);

  auto cycle = fig1_topology(1);
  cycle.links.push_back({{"sw1", 5}, {"sw2", 6}, 1});
  cycle.switches[0].port_count = 6;
  cycle.switches[1].port_count = 6;
  EXPECT_EQ(build_error(cycle), BuildErrorCode::kCycle);

  auto dangling = fig1_topology(1);
  dangling.links.push_back({{"ghost", std::nullopt}, {"sw1", 3}, 1});
  dangling.switches[0].port_count = 3;
  EXPECT_EQ(build_error(dangling), BuildErrorCode::kDanglingReference);

  auto server = fig1_topology(1);
  server.servers.dns = "nobody";
  EXPECT_EQ(build_error(server), BuildErrorCode::kDanglingReference);

  auto lonely = fig1_topology(1);
  lonely.hosts.push_back({"island", net::MacAddr{{2, 9, 9, 9, 9, 9}}, ip("10.0.0.99")});
  EXPECT_EQ(build_error(lonely), BuildErrorCode::kDisconnected);

  auto latency = fig1_topology(1);
  latency.links[0].latency = 0;
  EXPECT_EQ(build_error(latency), BuildErrorCode::kBadLatency);

  auto port = fig1_topology(1);
  port.links[0].b.port = 42;
  EXPECT_EQ(build_error(port), BuildErrorCode::kBadPort);
}

TEST(NetworkTest, EmptyNetworkIdlesAtZero) {
  Network n(Topology{}, Services{});
  auto r = n.run_until_idle(100);
  EXPECT_TRUE(r.idle);
  EXPECT_EQ(r.now, 0u);
  EXPECT_TRUE(n.trace().empty());
}

TEST(NetworkTest, SingleHostNothingToForward) {
  Topology t;
  t.hosts.push_back({"solo", net::MacAddr{{2, 0, 0, 0, 0, 9}}, ip("10.0.0.9")});
  Network n(t, Services{});
  EXPECT_TRUE(n.run_until_idle(100).idle);
  EXPECT_EQ(count_kind(n.trace(), TraceKind::kFrameRx), 0u);
  EXPECT_EQ(n.counters().enqueued, 0u);
}

TEST(NetworkTest, ScheduleRejectsServers) {
  Network n(fig1_topology(1), Services{});
  EXPECT_THROW(n.schedule({0, "dns", HttpGetAction{"http://x/"}}), std::invalid_argument);
  EXPECT_THROW(n.schedule({0, "nobody", HttpGetAction{"http://x/"}}), std::invalid_argument);
}

// host_http_get

class HttpGetTest : public ::testing::TestWithParam<CaptureTechnique> {};

TEST(HttpGetCaptiveTest, SpoofingCaptiveSeesLoginWithoutRedirect) {
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kDnsSpoofing, default_sites()));
  auto r = n.http_get("user1", "http://news.example/");
  ASSERT_TRUE(r.ok) << r.error;
  EXPECT_EQ(r.redirects, 0u);
  EXPECT_EQ(r.response->status, 200);
  EXPECT_NE(r.response->body.find(portal::kLoginMarker), std::string::npos);
}

TEST(HttpGetCaptiveTest, ForgeryCaptiveRedirectedOnce) {
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kIpForgery, default_sites()));
  auto r = n.http_get("user1", "http://news.example/");
  ASSERT_TRUE(r.ok) << r.error;
  EXPECT_EQ(r.redirects, 1u);
  ASSERT_EQ(r.hops.size(), 2u);
  EXPECT_EQ(r.hops[0].status, 302);
  EXPECT_EQ(r.hops[1].url, "http://portal.local/");
  EXPECT_NE(r.response->body.find(portal::kLoginMarker), std::string::npos);
}

TEST_P(HttpGetTest, AuthorizedUserGetsSiteBody) {
  Network n(fig1_with_sites(1, default_sites()), services_for(GetParam(), default_sites()));
  n.fabric().authorize_mac(Fig1Addresses::user_mac(0));
  auto r = n.http_get("user1", "http://news.example/");
  ASSERT_TRUE(r.ok) << r.error;
  EXPECT_EQ(r.redirects, 0u);
  EXPECT_EQ(r.response->body, "NEWS-PAGE welcome");
}

TEST_P(HttpGetTest, LoginThenSiteBody) {
  Network n(fig1_with_sites(1, default_sites()), services_for(GetParam(), default_sites()));
  n.schedule({1, "user1", HttpGetAction{"http://news.example/"}});
  n.schedule({1, "user1", LoginAction{"alice", "pw"}});
  n.schedule({1, "user1", HttpGetAction{"http://news.example/"}});
  auto run = n.run_until_idle(10000);
  ASSERT_TRUE(run.idle) << run.diagnostic();
  const auto& res = n.results();
  ASSERT_EQ(res.size(), 3u);
  EXPECT_NE(res[0].response->body, "NEWS-PAGE welcome");
  EXPECT_TRUE(res[1].ok);
  EXPECT_NE(res[1].response->body.find(portal::kLoginOkMarker), std::string::npos);
  EXPECT_EQ(res[2].response->body, "NEWS-PAGE welcome");
  EXPECT_TRUE(n.fabric().controller().auth_table().is_authorized(Fig1Addresses::user_mac(0)));
}

TEST_P(HttpGetTest, WrongPasswordStaysCaptive) {
  Network n(fig1_with_sites(1, default_sites()), services_for(GetParam(), default_sites()));
  n.schedule({1, "user1", HttpGetAction{"http://news.example/"}});
  n.schedule({1, "user1", LoginAction{"alice", "nope"}});
  n.schedule({1, "user1", HttpGetAction{"http://news.example/"}});
  ASSERT_TRUE(n.run_until_idle(10000).idle);
  EXPECT_EQ(n.results()[1].response->status, 403);
  ASSERT_TRUE(n.results()[2].response);
  EXPECT_NE(n.results()[2].response->body, "NEWS-PAGE welcome");
  EXPECT_EQ(n.fabric().controller().auth_table().authorized_count(), 0u);
  EXPECT_EQ(count_kind(n.trace(), TraceKind::kAuthLine), 0u);
}

INSTANTIATE_TEST_SUITE_P(Techniques, HttpGetTest,
                         ::testing::Values(CaptureTechnique::kDnsSpoofing,
                                           CaptureTechnique::kIpForgery));

TEST(HttpGetErrorsTest, NxDomain) {
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kIpForgery, default_sites()));
  auto r = n.http_get("user1", "http://missing.example/");
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.error, "nxdomain");
  EXPECT_TRUE(has_error(n.trace(), "nxdomain"));
}

TEST(HttpGetErrorsTest, RedirectBudget) {
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kIpForgery, default_sites()));
  auto r = n.http_get("user1", "http://news.example/", 0);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.error, "redirect-limit");
}

TEST(HttpGetErrorsTest, PolicyDropTimesOut) {
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kDnsSpoofing, default_sites()));
  auto r = n.http_get("user1", "http://93.184.216.34/");
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.error, "timeout");
  EXPECT_GE(r.finished - r.started, kDefaultTcpTimeout);
  EXPECT_GT(count_kind(n.trace(), TraceKind::kDrop), 0u);
}

TEST(HttpGetErrorsTest, TimeoutIsConfigurable) {
  NetworkOptions o;
  o.tcp_timeout = 10;
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kDnsSpoofing, default_sites()), o);
  auto r = n.http_get("user1", "http://93.184.216.34/");
  EXPECT_EQ(r.error, "timeout");
  EXPECT_EQ(r.finished - r.started, 10u);
}

TEST(DnsCacheTest, SpoofTtlForcesRequery) {
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kDnsSpoofing, default_sites()));
  n.http_get("user1", "http://news.example/");
  n.http_get("user1", "http://news.example/");
  EXPECT_EQ(count_kind(n.trace(), TraceKind::kDnsAnswer), 2u);
}

TEST(DnsCacheTest, GenuineTtlIsCached) {
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kIpForgery, default_sites()));
  n.fabric().authorize_mac(Fig1Addresses::user_mac(0));
  n.http_get("user1", "http://news.example/");
  n.http_get("user1", "http://news.example/");
  EXPECT_EQ(count_kind(n.trace(), TraceKind::kDnsAnswer), 1u);
}

// Auth channel

TEST(AuthChannelTest, DisabledChannelRefusesLogin) {
  NetworkOptions o;
  o.auth_channel = false;
  o.tcp_timeout = 30;
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kDnsSpoofing, default_sites()), o);
  n.schedule({200, "user1", LoginAction{"alice", "pw"}});
  ASSERT_TRUE(n.run_until_idle(10000).idle);
  ASSERT_EQ(n.results().size(), 1u);
  EXPECT_EQ(n.results()[0].response->status, 503);
  EXPECT_EQ(n.fabric().controller().auth_table().authorized_count(), 0u);
  EXPECT_TRUE(has_error(n.trace(), "auth-connect-timeout"));
}

TEST(AuthChannelTest, LateControllerReachedOnRetry) {
  NetworkOptions o;
  o.controller_listen = 30;
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kDnsSpoofing, default_sites()), o);
  n.schedule({1, "user1", LoginAction{"alice", "pw"}});
  ASSERT_TRUE(n.run_until_idle(10000).idle);
  EXPECT_TRUE(has_error(n.trace(), "auth-connect-timeout"));
  ASSERT_EQ(n.results().size(), 1u);
  EXPECT_EQ(n.results()[0].response->status, 200);
  EXPECT_TRUE(n.fabric().controller().auth_table().is_authorized(Fig1Addresses::user_mac(0)));
}

TEST(AuthChannelTest, LoginBeforeChannelIsHeldUntilUp) {
  NetworkOptions o;
  o.controller_listen = 30;
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kDnsSpoofing, default_sites()), o);
  n.schedule({0, "user1", LoginAction{"alice", "pw"}});
  ASSERT_TRUE(n.run_until_idle(10000).idle);
  EXPECT_EQ(n.results()[0].response->status, 200);
  EXPECT_GT(n.results()[0].finished, 64u);
}

// Run-level properties


std::unique_ptr<Network> random_run(std::uint64_t seed, CaptureTechnique technique) {
  testing::Gen g(seed);
  std::vector<testing::Site> sites;
  const auto nsites = g.uniform(1, 3);
  for (std::uint64_t i = 0; i < nsites; ++i) {
    sites.push_back({g.alnum(3, 8) + std::to_string(i) + ".example",
                     "93.184." + std::to_string(i) + "." + std::to_string(g.uniform(1, 250)),
                     "PAGE-" + g.alnum(4, 12)});
  }
  const std::size_t users = g.uniform(1, 3);
  auto n = std::make_unique<Network>(fig1_with_sites(users, sites), services_for(technique, sites));
  for (std::size_t u = 0; u < users; ++u) {
    const std::string host = "user" + std::to_string(u + 1);
    const auto steps = g.uniform(1, 4);
    for (std::uint64_t s = 0; s < steps; ++s) {
      const auto pick = g.uniform(0, 2);
      const Tick at = g.uniform(0, 40);
      if (pick == 0) {
        n->schedule({at, host, LoginAction{"alice", g.coin() ? "pw" : "bad"}});
      } else {
        n->schedule({at, host, HttpGetAction{"http://" + sites[g.uniform(0, nsites - 1)].domain + "/"}});
      }
    }
  }
  n->run_until_idle(100000);
  return n;
}

TEST(PropertyTest, Determinism) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (auto t : {CaptureTechnique::kDnsSpoofing, CaptureTechnique::kIpForgery}) {
      EXPECT_EQ(random_run(seed, t)->trace_text(), random_run(seed, t)->trace_text());
    }
  }
}

TEST(PropertyTest, Conservation) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto n = random_run(seed, seed % 2 ? CaptureTechnique::kDnsSpoofing : CaptureTechnique::kIpForgery);
    auto c = n->counters();
    EXPECT_EQ(c.enqueued, c.delivered + c.dropped);
    EXPECT_EQ(c.enqueued, count_kind(n->trace(), TraceKind::kFrameTx));
    EXPECT_EQ(c.delivered, count_kind(n->trace(), TraceKind::kFrameRx));
  }
}

TEST(PropertyTest, ConservationUnderBudgetExhaustion) {
  Network n(fig1_with_sites(1, default_sites()),
            services_for(CaptureTechnique::kDnsSpoofing, default_sites()));
  HttpGetAction poll{"http://news.example/"};
  poll.repeat = 0;
  n.schedule({0, "user1", poll});
  auto r = n.run_until_idle(500);
  EXPECT_FALSE(r.idle);
  EXPECT_NE(r.diagnostic().find("livelock"), std::string::npos);
  EXPECT_FALSE(r.pending.empty());
  auto c = n.counters();
  EXPECT_EQ(c.enqueued, c.delivered + c.dropped);
}

// Every IPv4 frame a host sends goes to a MAC it learned from ARP traffic it
// received earlier.
TEST(PropertyTest, ArpCorrectness) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto n = random_run(seed, seed % 2 ? CaptureTechnique::kDnsSpoofing : CaptureTechnique::kIpForgery);
    std::set<std::string> hosts;
    for (const auto& h : n->topology().hosts) hosts.insert(h.name);
    std::map<std::string, std::set<std::string>> learned;
    for (const auto& e : n->trace()) {
      const auto at = e.value("at");
      if (!hosts.count(at)) continue;
      if (e.kind == TraceKind::kFrameRx && e.value("type") == "arp") learned[at].insert(e.value("src"));
      if (e.kind == TraceKind::kFrameTx && e.value("type") == "ipv4") {
        EXPECT_TRUE(learned[at].count(e.value("dst")))
            << "seed " << seed << ": " << format_event(e);
      }
    }
  }
}

TEST(PropertyTest, NatOnlySeesPermittedFrames) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto n = random_run(seed, seed % 2 ? CaptureTechnique::kDnsSpoofing : CaptureTechnique::kIpForgery);
    EXPECT_FALSE(has_error(n->trace(), "policy-violation")) << seed;
  }
}

// DNAT

TEST(DnatTest, ReplySourceMatchesOriginalDestination) {
  auto sites = default_sites();
  auto services = services_for(CaptureTechnique::kIpForgery, sites);
  dns::RewriteRuleSet rules;
  rules.add({dns::RewriteMatch{net::kProtoUdp, ip("8.8.8.8"), 53}, dns::Rewrite{Fig1Addresses::dns_ip(), std::nullopt}});
  services.dns_mode = dns::mode::Dnat{rules, testing::zone_of(sites)};
  NetworkOptions o;
  o.resolver = ip("8.8.8.8");
  Network n(fig1_with_sites(1, sites), services, o);
  n.schedule({1, "user1", DnsQueryAction{"news.example"}});
  ASSERT_TRUE(n.run_until_idle(10000).idle);
  ASSERT_EQ(n.results().size(), 1u);
  EXPECT_TRUE(n.results()[0].ok) << n.results()[0].error;
  EXPECT_EQ(n.results()[0].address, ip("93.184.216.34"));
  std::size_t replies = 0;
  for (const auto& e : n.trace()) {
    if (e.kind != TraceKind::kFrameRx || e.value("at") != "user1" || e.value("sport") != "53") continue;
    ++replies;
    EXPECT_EQ(e.value("ip_src"), "8.8.8.8");
  }
  EXPECT_EQ(replies, 1u);
  EXPECT_FALSE(has_error(n.trace(), "dns-source-mismatch"));
}

TEST(DnatTest, WithoutRuleResolverIsUnreachable) {
  auto sites = default_sites();
  NetworkOptions o;
  o.resolver = ip("8.8.8.8");
  o.tcp_timeout = 20;
  Network n(fig1_with_sites(1, sites), services_for(CaptureTechnique::kIpForgery, sites), o);
  n.schedule({1, "user1", DnsQueryAction{"news.example"}});
  ASSERT_TRUE(n.run_until_idle(10000).idle);
  EXPECT_EQ(n.results()[0].error, "timeout");
}

}  // namespace
}  // namespace portalsim::sim
