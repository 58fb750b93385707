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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "portalsim/auth/line.hpp"
#include "portalsim/scenario/check.hpp"
#include "portalsim/scenario/scenario.hpp"
#include "portalsim/scenario/sequence.hpp"
#include "support/generators.hpp"

namespace {

using namespace portalsim;
using Clock = std::chrono::steady_clock;

const std::string kDir = PORTALSIM_SCENARIO_DIR;

std::string read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures.size() < 5) failures.push_back(what);
  }
};

scenario::Scenario load(const std::string& name) {
  auto s = scenario::load_scenario(kDir + "/" + name + ".scn");
  if (!s) throw std::runtime_error(name + ": " + s.error().message());
  return std::move(s).value();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// C1: spoofing login sequence against its golden

Verdict dns_spoofing_sequence() {
  Verdict v;
  const auto t0 = Clock::now();
  auto run = scenario::run_scenario(load("fig2_dns_spoofing"));
  const double elapsed = seconds_since(t0);
  const auto golden = read(kDir + "/golden/fig2_dns_spoofing.trace");
  auto cmp = scenario::compare_traces(golden, run.trace_text);
  v.require(cmp.status == scenario::CheckStatus::kIdentical, "golden: " + cmp.message());
  v.require(golden == run.trace_text, "trace bytes differ from golden");

  const std::vector<std::string> want = {"DNS query",    "spoofed DNS answer", "HTTP GET",
                                         "login page",   "POST /login",        "AUTH line",
                                         "DNS re-query", "genuine answer",     "HTTP GET",
                                         "site page"};
  v.require(scenario::arrow_labels(run.trace) == want, "arrow labels differ");

  bool spoof_to_portal = false;
  for (const auto& e : run.trace) {
    if (e.kind == sim::TraceKind::kDnsAnswer && e.value("source") == "spoofed") {
      spoof_to_portal = e.value("answer") == sim::Fig1Addresses::portal_ip().str();
      break;
    }
  }
  v.require(spoof_to_portal, "spoofed answer is not the portal address");
  v.require(run.run.idle, "run did not go idle");
  v.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
  v.detail = std::to_string(want.size()) + " arrows, golden identical, " + fmt(elapsed * 1000) + " ms";
  return v;
}

// C2: ip forgery redirect

Verdict ip_forgery_redirect() {
  Verdict v;
  auto run = scenario::run_scenario(load("ip_forgery_redirect"));
  const auto golden = read(kDir + "/golden/ip_forgery_redirect.trace");
  v.require(golden == run.trace_text, "trace differs from golden");
  auto trace = sim::parse_trace(golden);
  v.require(trace.ok(), "golden does not parse");
  if (!trace) return v;

  const auto site_ip = std::string("93.184.216.34");
  bool genuine = false;
  std::vector<const sim::TraceEvent*> user_rx;
  std::vector<const sim::TraceEvent*> portal_rx;
  for (const auto& e : *trace) {
    if (e.kind == sim::TraceKind::kDnsAnswer && e.value("name") == "news.example." && !genuine) {
      genuine = e.value("source") == "genuine" && e.value("answer") == site_ip;
    }
    if (e.kind == sim::TraceKind::kHttpRx && e.value("role") == "user") user_rx.push_back(&e);
    if (e.kind == sim::TraceKind::kHttpRx && e.value("role") == "portal") portal_rx.push_back(&e);
  }
  v.require(genuine, "first DNS answer for the site is not its genuine address");
  v.require(user_rx.size() >= 2, "fewer than two HTTP exchanges");
  if (user_rx.size() >= 2) {
    v.require(user_rx[0]->value("status") == "302", "first exchange is not a 302");
    v.require(user_rx[0]->value("location") == "http://portal.local/",
              "redirect target is " + user_rx[0]->value("location"));
    v.require(user_rx[1]->value("status") == "200" &&
                  user_rx[1]->value("body").rfind(portal::kLoginMarker, 0) == 0,
              "second exchange is not the login page");
  }
  v.require(portal_rx.size() >= 2 && portal_rx[1]->value("host") == "portal.local",
            "second connection does not reach the portal by name");
  v.require(!run.results.empty() && run.results[0].redirects == 1, "first GET did not follow one redirect");
  v.detail = "genuine DNS, 302 to portal.local, second exchange at the portal";
  return v;
}

// Randomized fig1 scenarios shared by C3 and C8

struct SiteDef {
  std::string domain;
  std::string ip;
  std::string body;
};

struct StepDef {
  sim::Tick at;
  std::size_t user;  // 0-based
  enum Kind { kGet, kLogin, kQuery } kind;
  std::string url;
  std::size_t site = 0;
  bool valid = false;
};

struct RandomScenario {
  std::string text;
  bool spoofing = true;
  std::size_t users = 1;
  std::vector<SiteDef> sites;
  std::vector<StepDef> steps;  // in file order
};

RandomScenario random_scenario(std::uint64_t seed) {
  testing::Gen g(seed);
  RandomScenario r;
  r.spoofing = g.coin();
  const bool dnat = !r.spoofing && g.coin();
  r.users = g.uniform(1, 4);

  const auto nsites = g.uniform(1, 5);
  std::set<std::string> ips;
  for (std::uint64_t i = 0; i < nsites; ++i) {
    SiteDef s;
    s.domain = g.alnum(2, 10) + std::to_string(i) + (g.coin() ? ".example" : ".test");
    do {
      s.ip = std::to_string(g.uniform(20, 200)) + "." + std::to_string(g.uniform(0, 255)) + "." +
             std::to_string(g.uniform(0, 255)) + "." + std::to_string(g.uniform(1, 254));
    } while (!ips.insert(s.ip).second);
    s.body = "BODY-" + std::to_string(i) + "-" + g.alnum(6, 20);
    r.sites.push_back(std::move(s));
  }

  const std::string user = "u" + g.alnum(3, 6);
  const std::string pass = "p" + g.alnum(3, 10);

  std::vector<std::vector<StepDef>> per_user(r.users);
  for (std::size_t u = 0; u < r.users; ++u) {
    sim::Tick at = g.uniform(0, 20);
    const auto n = g.uniform(1, 5);
    for (std::uint64_t k = 0; k < n; ++k) {
      at += g.uniform(0, 30);
      StepDef s{at, u, StepDef::kGet, {}, g.uniform(0, nsites - 1), false};
      const auto pick = g.uniform(0, 9);
      if (pick < 5) {
        const auto& site = r.sites[s.site];
        s.url = "http://" + (pick == 0 ? site.ip : site.domain) + "/" + (g.coin() ? "" : g.alnum(1, 6));
      } else if (pick < 8) {
        s.kind = StepDef::kLogin;
        s.valid = pick != 7;
        s.url = s.valid ? user + " " + pass : (g.coin() ? user + " x" + pass : "x" + user + " " + pass);
      } else {
        s.kind = StepDef::kQuery;
        s.url = g.coin() ? r.sites[s.site].domain : g.alnum(3, 8) + ".invalid";
      }
      per_user[u].push_back(s);
      if (s.kind == StepDef::kLogin && s.valid) {
        StepDef after{at, u, StepDef::kGet, {}, g.uniform(0, nsites - 1), false};
        after.url = "http://" + r.sites[after.site].domain + "/";
        per_user[u].push_back(after);
      }
    }
  }
  for (auto& steps : per_user) r.steps.insert(r.steps.end(), steps.begin(), steps.end());
  std::stable_sort(r.steps.begin(), r.steps.end(),
                   [](const StepDef& a, const StepDef& b) { return a.at < b.at; });

  std::ostringstream o;
  o << "portalsim-scenario 1\n[topology]\npreset fig1 users=" << r.users << "\n";
  o << "[technique]\n" << (r.spoofing ? "dns-spoofing" : "ip-forgery") << "\n";
  o << "[dns]\n" << (r.spoofing ? "spoof-all" : dnat ? "dnat" : "proxy") << "\n";
  if (dnat) o << "[rewrite]\nudp 8.8.8.8:53 -> 10.0.0.3\n[options]\nresolver 8.8.8.8\n";
  o << "[credentials]\n" << user << " " << pass << "\n";
  o << "[sites]\n";
  for (const auto& s : r.sites) o << s.domain << " " << s.ip << " \"" << s.body << "\"\n";
  o << "[script]\n";
  for (const auto& s : r.steps) {
    o << s.at << " user" << s.user + 1 << " ";
    switch (s.kind) {
      case StepDef::kGet: o << "http_get " << s.url; break;
      case StepDef::kLogin: o << "login " << s.url; break;
      case StepDef::kQuery: o << "dns_query " << s.url; break;
    }
    o << "\n";
  }
  r.text = o.str();
  return r;
}

struct RandomOutcome {
  RandomScenario scenario;
  scenario::ScenarioRun run;
};

std::vector<RandomOutcome>& random_runs() {
  static std::vector<RandomOutcome> runs = [] {
    std::vector<RandomOutcome> out;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      auto def = random_scenario(seed * 7919);
      auto parsed = scenario::parse_scenario(def.text);
      if (!parsed) throw std::runtime_error("random scenario rejected: " + parsed.error().message());
      auto run = scenario::run_scenario(*parsed);
      out.push_back({std::move(def), std::move(run)});
    }
    return out;
  }();
  return runs;
}

// C3: captivity invariant

Verdict captivity() {
  Verdict v;
  const auto t0 = Clock::now();
  auto& runs = random_runs();
  std::size_t gets = 0;
  std::size_t authorized_gets = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& def = runs[i].scenario;
    const auto& run = runs[i].run;
    const std::string tag = "scenario " + std::to_string(i + 1) + ": ";
    v.require(run.run.idle, tag + run.run.diagnostic());

    for (std::size_t u = 0; u < def.users; ++u) {
      const std::string host = "user" + std::to_string(u + 1);
      std::vector<const sim::ActionResult*> results;
      for (const auto& r : run.results) {
        if (r.host == host) results.push_back(&r);
      }
      std::vector<const StepDef*> steps;
      for (const auto& s : def.steps) {
        if (s.user == u) steps.push_back(&s);
      }
      v.require(results.size() == steps.size(), tag + host + " finished " +
                                                    std::to_string(results.size()) + " of " +
                                                    std::to_string(steps.size()) + " steps");
      bool authorized = false;
      for (std::size_t k = 0; k < std::min(results.size(), steps.size()); ++k) {
        const auto& step = *steps[k];
        const auto& res = *results[k];
        if (step.kind == StepDef::kLogin) {
          const auto status = res.response ? res.response->status : 0;
          v.require(status == (step.valid ? 200 : 403),
                    tag + host + " login answered " + std::to_string(status));
          authorized = authorized || step.valid;
          continue;
        }
        if (step.kind != StepDef::kGet) continue;
        ++gets;
        const std::string body = res.response ? res.response->body : std::string();
        if (authorized) {
          ++authorized_gets;
          v.require(res.ok && body == def.sites[step.site].body,
                    tag + host + " authorized GET " + step.url + " got '" + body.substr(0, 30) +
                        "' error=" + res.error);
        } else {
          for (const auto& site : def.sites) {
            v.require(body.find(site.body) == std::string::npos,
                      tag + host + " captive GET " + step.url + " received a page body");
          }
        }
      }
    }

    // Trace-level view: the gateway only serves pages to hosts whose AUTH
    // line the controller had already received.
    std::map<std::string, sim::Tick> auth_at;
    for (const auto& e : run.trace) {
      if (e.kind == sim::TraceKind::kAuthLine && e.value("role") == "controller" &&
          e.value("dir") == "rx") {
        const auto line = e.value("line");
        const auto mac = line.substr(line.find(' ') + 1);
        auth_at.emplace(mac, e.tick);
      }
      if (e.kind == sim::TraceKind::kHttpTx && e.value("role") == "nat") {
        const auto peer = e.value("peer").substr(0, e.value("peer").find(':'));
        std::string mac;
        for (std::size_t u = 0; u < def.users; ++u) {
          if (sim::Fig1Addresses::user_ip(u).str() == peer) mac = sim::Fig1Addresses::user_mac(u).str();
        }
        auto it = auth_at.find(mac);
        v.require(it != auth_at.end() && it->second <= e.tick,
                  tag + "gateway served a page to captive " + peer);
      }
    }
  }
  const double elapsed = seconds_since(t0);
  v.require(elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
  v.detail = std::to_string(runs.size()) + " scenarios, " + std::to_string(gets) + " GETs (" +
             std::to_string(authorized_gets) + " after login), " + fmt(elapsed) + " s";
  return v;
}

// C8: exactly-once authorization

Verdict exactly_once() {
  Verdict v;
  auto& runs = random_runs();
  std::size_t macs = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& def = runs[i].scenario;
    const auto& run = runs[i].run;
    std::map<std::string, std::size_t> commands;
    for (const auto& e : run.trace) {
      if (e.kind == sim::TraceKind::kAuthLine && e.value("role") == "portal" && e.value("dir") == "tx" &&
          e.value("line").rfind("AUTH ", 0) == 0) {
        ++commands[e.value("line").substr(5)];
      }
    }
    std::map<std::string, std::size_t> valid_logins;
    for (const auto& s : def.steps) {
      if (s.kind == StepDef::kLogin && s.valid) ++valid_logins[sim::Fig1Addresses::user_mac(s.user).str()];
    }
    for (std::size_t u = 0; u < def.users; ++u) {
      const auto mac = sim::Fig1Addresses::user_mac(u).str();
      const std::size_t want = std::min<std::size_t>(1, valid_logins[mac]);
      const std::size_t got = commands[mac];
      ++macs;
      v.require(got == want, "scenario " + std::to_string(i + 1) + ": " + mac + " saw " +
                                 std::to_string(got) + " AUTH commands, expected " + std::to_string(want));
    }
    for (const auto& [mac, n] : commands) {
      v.require(valid_logins.count(mac) != 0, "AUTH for a MAC that never logged in: " + mac);
    }
  }
  v.detail = std::to_string(macs) + " MACs across " + std::to_string(runs.size()) + " runs";
  return v;
}

// C4: learning-switch convergence

Verdict learning_switch() {
  Verdict v;
  std::size_t frames = 0;
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    testing::Gen g(1000 + trial);
    sim::Topology topo;
    const std::size_t nsw = g.uniform(1, 6);
    const std::size_t nhost = g.uniform(2, 8);
    std::vector<std::uint16_t> used(nsw, 0);
    std::vector<sim::LinkSpec> links;
    for (std::size_t s = 1; s < nsw; ++s) {
      const std::size_t parent = g.uniform(0, s - 1);
      links.push_back({{"s" + std::to_string(parent), ++used[parent]}, {"s" + std::to_string(s), ++used[s]},
                       static_cast<std::uint32_t>(g.uniform(1, 3))});
    }
    std::set<net::MacAddr> macs;
    for (std::size_t h = 0; h < nhost; ++h) {
      net::MacAddr mac;
      do {
        mac = g.mac();
      } while (!macs.insert(mac).second);
      const std::string name = "h" + std::to_string(h);
      topo.hosts.push_back({name, mac, net::Ipv4Addr{{10, 1, 0, static_cast<std::uint8_t>(h + 1)}}});
      const std::size_t sw = g.uniform(0, nsw - 1);
      links.push_back({{name, std::nullopt}, {"s" + std::to_string(sw), ++used[sw]},
                       static_cast<std::uint32_t>(g.uniform(1, 3))});
    }
    for (std::size_t s = 0; s < nsw; ++s) {
      topo.switches.push_back({"s" + std::to_string(s), std::max<std::uint16_t>(used[s], 1)});
    }
    topo.links = links;

    sim::Network net(topo, sim::Services{});
    for (const auto& h : topo.hosts) net.fabric().authorize_mac(h.mac);

    constexpr std::uint16_t kType = 0x88b5;
    std::vector<std::pair<std::size_t, net::EthernetFrame>> sent;
    std::uint32_t serial = 0;
    auto frame = [&](std::size_t src, const net::MacAddr& dst) {
      net::Bytes payload{static_cast<std::uint8_t>(serial >> 8), static_cast<std::uint8_t>(serial)};
      ++serial;
      return net::EthernetFrame{dst, topo.hosts[src].mac, kType, payload};
    };
    for (std::size_t h = 0; h < nhost; ++h) {
      auto f = frame(h, net::MacAddr::broadcast());
      net.send_raw(topo.hosts[h].name, f, h);
      sent.emplace_back(h, f);
    }
    constexpr sim::Tick kSteady = 1000;
    const std::size_t unicasts = g.uniform(nhost, 4 * nhost);
    for (std::size_t k = 0; k < unicasts; ++k) {
      const std::size_t a = g.uniform(0, nhost - 1);
      std::size_t b = g.uniform(0, nhost - 2);
      if (b >= a) ++b;
      auto f = frame(a, topo.hosts[b].mac);
      net.send_raw(topo.hosts[a].name, f, kSteady + g.uniform(0, 50));
      sent.emplace_back(a, f);
    }
    auto r = net.run_until_idle(100000);
    const std::string tag = "trial " + std::to_string(trial) + ": ";
    v.require(r.idle, tag + r.diagnostic());

    std::size_t late_packet_in = 0;
    std::size_t late_flood = 0;
    for (const auto& e : net.trace()) {
      if (e.tick < kSteady) continue;
      late_packet_in += e.kind == sim::TraceKind::kPacketIn;
      late_flood += e.kind == sim::TraceKind::kPacketOut && e.value("flood") == "yes";
    }
    v.require(late_packet_in == 0, tag + std::to_string(late_packet_in) + " PacketIn after warm-up");
    v.require(late_flood == 0, tag + std::to_string(late_flood) + " floods after warm-up");

    // Flooding oracle: every frame reaches every other host once, and a host
    // keeps the ones addressed to it or to everyone.
    for (std::size_t h = 0; h < nhost; ++h) {
      std::vector<net::Bytes> want;
      for (const auto& [src, f] : sent) {
        if (src != h && (f.dst == topo.hosts[h].mac || f.dst.is_broadcast())) want.push_back(net::encode_frame(f));
      }
      std::vector<net::Bytes> got;
      for (const auto& f : net.accepted(topo.hosts[h].name)) got.push_back(net::encode_frame(f));
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      v.require(want == got, tag + topo.hosts[h].name + " delivered multiset differs from flooding oracle");
    }
    frames += sent.size();
  }
  v.detail = "200 random trees, " + std::to_string(frames) + " frames";
  return v;
}

// C5: codec round trip and fuzz

Verdict codecs() {
  Verdict v;
  constexpr int kN = 10000;
  testing::Gen g(2026);
  std::map<std::string, int> round_trips;
  auto check = [&](const std::string& layer, bool ok) {
    v.require(ok, layer + " round trip failed");
    ++round_trips[layer];
  };
  for (int i = 0; i < kN; ++i) {
    auto f = g.frame();
    auto df = net::decode_frame(net::encode_frame(f));
    check("ethernet", df && *df == f);
    auto a = g.arp();
    auto da = net::decode_arp(net::encode_arp(a));
    check("arp", da && *da == a);
    auto p = g.ipv4();
    auto dp = net::decode_ipv4(net::encode_ipv4(p));
    check("ipv4", dp && *dp == p);
    auto u = g.udp();
    auto du = net::decode_udp(net::encode_udp(u));
    check("udp", du && *du == u);
    auto t = g.tcp();
    auto dt = net::decode_tcp(net::encode_tcp(t));
    check("tcp", dt && *dt == t);
    auto d = g.dns();
    auto wire = net::encode_dns(d);
    auto dd = wire ? net::decode_dns(*wire) : net::Decoded<net::DnsMessage>(net::decode_error(net::DecodeErrorCode::kTruncated));
    check("dns", wire && dd && *dd == d);
    auto h = g.http();
    auto ph = net::parse_http(net::render_http(h));
    check("http", ph && *ph == h);
    auth::AuthCommand cmd{g.coin() ? auth::Verb::kAuth : auth::Verb::kQuery, g.mac()};
    auto dc = auth::decode_command_line(auth::encode_auth_line(cmd));
    check("auth-line", dc && *dc == cmd);
    static const auth::AuthReply kReplies[] = {auth::AuthReply::ok(), auth::AuthReply::unknown(),
                                               auth::AuthReply::ok_state(true),
                                               auth::AuthReply::ok_state(false)};
    const auto& reply = kReplies[g.uniform(0, 3)];
    auto dr = auth::decode_reply_line(auth::encode_auth_line(reply));
    check("auth-reply", dr && *dr == reply);
  }

  // Random octets plus mutated valid encodings; every call must return.
  std::size_t decoded = 0;
  std::size_t rejected = 0;
  auto tally = [&](bool ok) { ok ? ++decoded : ++rejected; };
  auto mutate = [&](net::Bytes b) {
    if (!b.empty()) {
      const auto flips = g.uniform(1, 4);
      for (std::uint64_t k = 0; k < flips; ++k) b[g.uniform(0, b.size() - 1)] ^= static_cast<std::uint8_t>(1u << g.uniform(0, 7));
      if (g.coin()) b.resize(g.uniform(0, b.size()));
    }
    return b;
  };
  try {
    for (int i = 0; i < kN; ++i) {
      const auto junk = g.bytes(128);
      const std::string text(junk.begin(), junk.end());
      tally(net::decode_frame(junk).ok());
      tally(net::decode_arp(junk).ok());
      tally(net::decode_ipv4(junk).ok());
      tally(net::decode_udp(junk).ok());
      tally(net::decode_tcp(junk).ok());
      tally(net::decode_dns(junk).ok());
      tally(net::parse_http(text).ok());
      tally(auth::decode_command_line(text).ok());
      tally(auth::decode_reply_line(text).ok());

      tally(net::decode_arp(mutate(net::encode_arp(g.arp()))).ok());
      tally(net::decode_ipv4(mutate(net::encode_ipv4(g.ipv4()))).ok());
      tally(net::decode_udp(mutate(net::encode_udp(g.udp()))).ok());
      tally(net::decode_tcp(mutate(net::encode_tcp(g.tcp()))).ok());
      if (auto w = net::encode_dns(g.dns())) tally(net::decode_dns(mutate(*w)).ok());
      const auto http = net::render_http(g.http());
      const auto mh = mutate(net::Bytes(http.begin(), http.end()));
      tally(net::parse_http(std::string(mh.begin(), mh.end())).ok());
    }
  } catch (const std::exception& e) {
    v.require(false, std::string("decoder threw: ") + e.what());
  }
  bool all_counts = true;
  for (const auto& [layer, n] : round_trips) all_counts = all_counts && n >= kN;
  v.require(all_counts && round_trips.size() == 9, "fewer than 10000 records on some layer");
  v.detail = std::to_string(round_trips.size()) + " layers x " + std::to_string(kN) +
             " round trips; fuzz " + std::to_string(decoded + rejected) + " inputs (" +
             std::to_string(rejected) + " rejected)";
  return v;
}

// C6: DNAT transparency

Verdict dnat_transparency() {
  Verdict v;
  auto run = scenario::run_scenario(load("dnat_rewrite"));
  // (client port) -> original destination of the query
  std::map<std::string, std::string> asked;
  std::size_t exchanges = 0;
  std::size_t rewritten = 0;
  for (const auto& e : run.trace) {
    if (e.value("at") != "user1" || e.value("type") != "ipv4" || e.value("proto") != "udp") continue;
    if (e.kind == sim::TraceKind::kFrameTx && e.value("dport") == "53") {
      asked[e.value("sport")] = e.value("ip_dst");
    } else if (e.kind == sim::TraceKind::kFrameRx && e.value("sport") == "53") {
      auto it = asked.find(e.value("dport"));
      v.require(it != asked.end(), "reply on a port with no query: " + sim::format_event(e));
      if (it == asked.end()) continue;
      ++exchanges;
      v.require(e.value("ip_src") == it->second,
                "reply source " + e.value("ip_src") + " != original destination " + it->second);
      asked.erase(it);
    }
  }
  for (const auto& e : run.trace) {
    if (e.kind == sim::TraceKind::kDnsAnswer) rewritten += e.value("client") == sim::Fig1Addresses::nat_ip().str();
    if (e.kind == sim::TraceKind::kHostError) v.require(false, "host error: " + sim::format_event(e));
  }
  v.require(exchanges > 0, "no DNS exchanges observed");
  v.require(rewritten == exchanges, "not every exchange went through the rewrite");
  v.require(asked.empty(), std::to_string(asked.size()) + " queries without a reply");
  v.detail = std::to_string(exchanges) + " rewritten exchanges, reply source = 8.8.8.8 in each";
  return v;
}

// C7: determinism

Verdict determinism() {
  Verdict v;
  const std::vector<std::string> bundled = {"fig2_dns_spoofing",    "ip_forgery_redirect",
                                            "dnat_rewrite",         "learning_switch_only",
                                            "wrong_password",       "livelock_poll"};
  for (const auto& name : bundled) {
    auto s = load(name);
    auto a = scenario::run_scenario(s);
    auto b = scenario::run_scenario(s);
    v.require(a.trace_text == b.trace_text, name + " differs between runs");
    v.require(a.trace_text == read(kDir + "/golden/" + name + ".trace"), name + " differs from golden");
  }
  v.detail = std::to_string(bundled.size()) + " bundled scenarios, two runs each";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Verdict()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"C1", "dns-spoofing login sequence", dns_spoofing_sequence},
      {"C2", "ip-forgery redirect", ip_forgery_redirect},
      {"C3", "captivity invariant", captivity},
      {"C4", "learning-switch convergence", learning_switch},
      {"C5", "codec round trip and fuzz", codecs},
      {"C6", "DNAT transparency", dnat_transparency},
      {"C7", "determinism", determinism},
      {"C8", "exactly-once authorization", exactly_once},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (v.pass ? "PASS " : "FAIL ") << c.id << " " << c.name;
    if (!v.detail.empty()) std::cout << ": " << v.detail;
    std::cout << "\n";
    for (const auto& f : v.failures) std::cout << "     " << f << "\n";
    failed += !v.pass;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
