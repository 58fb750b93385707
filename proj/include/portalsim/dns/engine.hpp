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

#include <string_view>
#include <variant>

#include "portalsim/dns/rewrite.hpp"
#include "portalsim/dns/zone.hpp"
#include "portalsim/net/dns.hpp"

namespace portalsim::dns {

inline constexpr std::string_view kDefaultPortalDomain = "portal.local";
inline constexpr std::uint32_t kSpoofTtl = 0;
inline constexpr std::uint32_t kGenuineTtl = 60;

namespace mode {
// Every name answers with the portal address.
struct SpoofAll {
  net::Ipv4Addr portal_ip;
};
// Resolve on the client's behalf from a static upstream table.
struct Proxy {
  ZoneDb upstream;
};
// Port-53 traffic is rewritten toward the local server, which answers
// genuinely from `inner`. The rules are applied on the gateway.
struct Dnat {
  RewriteRuleSet rules;
  ZoneDb inner;
};
}  // namespace mode

using DnsMode = std::variant<mode::SpoofAll, mode::Proxy, mode::Dnat>;

std::string_view mode_name(const DnsMode& mode);

// How an answer was produced; surfaces in traces.
enum class AnswerKind { kSpoofed, kGenuine, kPortal, kNxDomain, kFormErr };
std::string_view to_string(AnswerKind kind);

struct DnsAnswer {
  net::DnsMessage message;
  AnswerKind kind;
};

// The portal's own name resolves to portal_ip in every mode. Non-A questions
// get NXDomain with no answers; anything but exactly one question is FormErr.
DnsAnswer answer_query(const DnsMode& mode, const net::DnsMessage& query, net::Ipv4Addr portal_ip,
                       const net::DomainName& portal_domain);

net::DnsMessage handle_dns_query(const DnsMode& mode, const net::DnsMessage& query,
                                 net::Ipv4Addr portal_ip);

}  // namespace portalsim::dns
