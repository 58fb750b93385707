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

#include "portalsim/dns/engine.hpp"

namespace portalsim::dns {

std::string_view mode_name(const DnsMode& mode) {
  switch (mode.index()) {
    case 0: return "spoof-all";
    case 1: return "proxy";
    default: return "dnat";
  }
}

std::string_view to_string(AnswerKind kind) {
  switch (kind) {
    case AnswerKind::kSpoofed: return "spoofed";
    case AnswerKind::kGenuine: return "genuine";
    case AnswerKind::kPortal: return "portal";
    case AnswerKind::kNxDomain: return "nxdomain";
    case AnswerKind::kFormErr: return "formerr";
  }
  return "?";
}

namespace {

net::DnsMessage response_to(const net::DnsMessage& q, bool recursive) {
  net::DnsMessage r;
  r.id = q.id;
  r.qr = net::DnsMessage::Kind::kResponse;
  r.opcode = q.opcode;
  r.recursion_desired = q.recursion_desired;
  r.recursion_available = recursive;
  r.questions = q.questions;
  return r;
}

const ZoneDb* zone_of(const DnsMode& mode) {
  if (auto* p = std::get_if<mode::Proxy>(&mode)) return &p->upstream;
  if (auto* d = std::get_if<mode::Dnat>(&mode)) return &d->inner;
  return nullptr;
}

}  // namespace

DnsAnswer answer_query(const DnsMode& mode, const net::DnsMessage& query, net::Ipv4Addr portal_ip,
                       const net::DomainName& portal_domain) {
  const bool spoofing = std::holds_alternative<mode::SpoofAll>(mode);
  net::DnsMessage r = response_to(query, !spoofing);

  if (query.qr != net::DnsMessage::Kind::kQuery || query.questions.size() != 1) {
    r.rcode = net::DnsRcode::kFormErr;
    return {std::move(r), AnswerKind::kFormErr};
  }
  const auto& q = query.questions.front();
  if (q.qtype != net::kDnsTypeA || q.qclass != net::kDnsClassIn) {
    r.rcode = net::DnsRcode::kNxDomain;
    return {std::move(r), AnswerKind::kNxDomain};
  }
  if (q.qname == portal_domain) {
    r.answers.push_back(net::DnsRecord::a(q.qname, portal_ip, kGenuineTtl));
    return {std::move(r), AnswerKind::kPortal};
  }
  if (auto* s = std::get_if<mode::SpoofAll>(&mode)) {
    r.answers.push_back(net::DnsRecord::a(q.qname, s->portal_ip, kSpoofTtl));
    return {std::move(r), AnswerKind::kSpoofed};
  }
  if (auto addr = zone_of(mode)->lookup(q.qname)) {
    r.answers.push_back(net::DnsRecord::a(q.qname, *addr, kGenuineTtl));
    return {std::move(r), AnswerKind::kGenuine};
  }
  r.rcode = net::DnsRcode::kNxDomain;
  return {std::move(r), AnswerKind::kNxDomain};
}

net::DnsMessage handle_dns_query(const DnsMode& mode, const net::DnsMessage& query,
                                 net::Ipv4Addr portal_ip) {
  static const net::DomainName kPortal =
      std::move(net::DomainName::parse(kDefaultPortalDomain)).value();
  return answer_query(mode, query, portal_ip, kPortal).message;
}

}  // namespace portalsim::dns
