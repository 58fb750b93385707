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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "portalsim/net/addr.hpp"
#include "portalsim/net/bytes.hpp"
#include "portalsim/net/decode_error.hpp"

namespace portalsim::net {

inline constexpr std::uint16_t kDnsPort = 53;
inline constexpr std::uint16_t kDnsTypeA = 1;
inline constexpr std::uint16_t kDnsClassIn = 1;
inline constexpr std::size_t kDnsHeaderLen = 12;
inline constexpr std::size_t kMaxLabelLen = 63;
inline constexpr std::size_t kMaxNameLen = 255;

enum class DnsRcode : std::uint8_t { kNoError = 0, kFormErr = 1, kNxDomain = 3 };

// A domain name as a list of lowercase labels. The root is the empty list.
// Text form is dot-separated with a trailing dot ("news.example.").
class DomainName {
 public:
  DomainName() = default;
  // Accepts names with or without the trailing dot; lowercases. Fails on empty
  // labels, labels over 63 octets or names whose wire form exceeds 255 octets.
  static Decoded<DomainName> parse(std::string_view text);
  static Decoded<DomainName> from_labels(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  // Length of the uncompressed wire encoding, including the root octet.
  std::size_t wire_length() const;
  std::string str() const;

  auto operator<=>(const DomainName&) const = default;

 private:
  std::vector<std::string> labels_;
};

struct DnsQuestion {
  DomainName qname;
  std::uint16_t qtype = kDnsTypeA;
  std::uint16_t qclass = kDnsClassIn;

  bool operator==(const DnsQuestion&) const = default;
};

struct DnsRecord {
  DomainName name;
  std::uint16_t rtype = kDnsTypeA;
  std::uint16_t rclass = kDnsClassIn;
  std::uint32_t ttl = 0;
  Bytes rdata;

  static DnsRecord a(DomainName name, Ipv4Addr addr, std::uint32_t ttl);

  bool operator==(const DnsRecord&) const = default;
};

struct DnsMessage {
  enum class Kind : std::uint8_t { kQuery = 0, kResponse = 1 };

  std::uint16_t id = 0;
  Kind qr = Kind::kQuery;
  std::uint8_t opcode = 0;
  DnsRcode rcode = DnsRcode::kNoError;
  bool recursion_desired = false;
  bool recursion_available = false;
  std::vector<DnsQuestion> questions;
  std::vector<DnsRecord> answers;

  bool operator==(const DnsMessage&) const = default;
};

// Encodes without name compression. Fails when an A record's rdata is not four
// octets (label and name limits are enforced by DomainName).
Decoded<Bytes> encode_dns(const DnsMessage& msg);

// Accepts compression pointers anywhere a name may appear. Authority and
// additional sections are parsed for well-formedness and discarded.
Decoded<DnsMessage> decode_dns(ByteView wire);

}  // namespace portalsim::net
