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

// Random generators for valid protocol records, shared by unit and acceptance
// tests. Every generator produces a value satisfying its type's invariants.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "portalsim/net/addr.hpp"
#include "portalsim/net/dns.hpp"
#include "portalsim/net/ethernet.hpp"
#include "portalsim/net/http.hpp"
#include "portalsim/net/ipv4.hpp"

namespace portalsim::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng_);
  }
  bool coin() { return uniform(0, 1) == 1; }
  std::uint8_t u8() { return static_cast<std::uint8_t>(uniform(0, 0xff)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(uniform(0, 0xffff)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uniform(0, 0xffffffffu)); }

  net::Bytes bytes(std::size_t max_len) {
    net::Bytes out(uniform(0, max_len));
    for (auto& b : out) b = u8();
    return out;
  }

  std::string alnum(std::size_t min_len, std::size_t max_len) {
    static constexpr char kChars[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string out(uniform(min_len, max_len), 'a');
    for (auto& c : out) c = kChars[uniform(0, sizeof(kChars) - 2)];
    return out;
  }

  // Unicast source-capable address (group bit clear).
  net::MacAddr mac() {
    net::MacAddr m;
    for (auto& o : m.octets) o = u8();
    m.octets[0] &= 0xfe;
    return m;
  }
  net::Ipv4Addr ip() { return net::Ipv4Addr::from_u32(u32()); }

  net::EthernetFrame frame() {
    net::EthernetFrame f{coin() ? net::MacAddr::broadcast() : mac(), mac(),
                         static_cast<std::uint16_t>(uniform(0x0600, 0xffff)), bytes(64)};
    return f;
  }

  net::ArpPacket arp() {
    if (coin()) return net::ArpPacket::request(mac(), ip(), ip());
    return net::ArpPacket::reply(mac(), ip(), mac(), ip());
  }

  net::Ipv4Packet ipv4() {
    net::Ipv4Packet p;
    p.src = ip();
    p.dst = ip();
    p.protocol = u8();
    p.ttl = u8();
    p.identification = u16();
    p.payload = bytes(96);
    net::refresh_checksum(p);
    return p;
  }

  net::UdpDatagram udp() { return {u16(), u16(), bytes(96)}; }

  net::TcpSegment tcp() {
    net::TcpSegment s;
    s.src_port = u16();
    s.dst_port = u16();
    s.seq = u32();
    s.ack = u32();
    s.flags = {coin(), coin(), coin()};
    if (!s.flags.syn) s.payload = bytes(96);
    return s;
  }

  net::DomainName name() {
    std::vector<std::string> labels;
    const auto n = uniform(0, 4);
    for (std::uint64_t i = 0; i < n; ++i) labels.push_back(alnum(1, uniform(0, 7) == 0 ? 63 : 10));
    return std::move(net::DomainName::from_labels(std::move(labels))).value();
  }

  net::DnsMessage dns() {
    net::DnsMessage m;
    m.id = u16();
    m.qr = coin() ? net::DnsMessage::Kind::kResponse : net::DnsMessage::Kind::kQuery;
    static constexpr net::DnsRcode kRcodes[] = {net::DnsRcode::kNoError, net::DnsRcode::kFormErr,
                                                net::DnsRcode::kNxDomain};
    m.rcode = kRcodes[uniform(0, 2)];
    m.recursion_desired = coin();
    m.recursion_available = coin();
    const auto nq = uniform(0, 2);
    for (std::uint64_t i = 0; i < nq; ++i) {
      m.questions.push_back({name(), coin() ? net::kDnsTypeA : u16(), coin() ? net::kDnsClassIn : u16()});
    }
    const auto na = uniform(0, 3);
    for (std::uint64_t i = 0; i < na; ++i) {
      if (coin()) {
        m.answers.push_back(net::DnsRecord::a(name(), ip(), u32()));
      } else {
        net::DnsRecord r;
        r.name = name();
        r.rtype = static_cast<std::uint16_t>(uniform(2, 0xffff));
        r.rclass = u16();
        r.ttl = u32();
        r.rdata = bytes(24);
        m.answers.push_back(std::move(r));
      }
    }
    return m;
  }

  net::HttpMessage http() {
    net::HttpHeaders headers;
    const auto nh = uniform(0, 3);
    for (std::uint64_t i = 0; i < nh; ++i) headers.emplace_back("X-" + alnum(1, 8), alnum(0, 16));
    std::string body = coin() ? alnum(1, 64) : std::string();
    if (!body.empty()) headers.emplace_back("Content-Length", std::to_string(body.size()));
    if (coin()) {
      net::HttpRequest req;
      req.method = coin() ? net::HttpMethod::kGet : net::HttpMethod::kPost;
      req.path = "/" + alnum(0, 12);
      req.headers.emplace_back("Host", alnum(1, 10) + ".example");
      req.headers.insert(req.headers.end(), headers.begin(), headers.end());
      req.body = std::move(body);
      return req;
    }
    static constexpr std::uint16_t kStatuses[] = {200, 302, 400, 403, 404, 503};
    net::HttpResponse resp;
    resp.status = kStatuses[uniform(0, 5)];
    resp.headers = std::move(headers);
    resp.body = std::move(body);
    return resp;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace portalsim::testing
