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

#include "portalsim/net/dns.hpp"

#include <algorithm>
#include <set>

namespace portalsim::net {

namespace {

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), lower);
  return s;
}

}  // namespace

Decoded<DomainName> DomainName::from_labels(std::vector<std::string> labels) {
  std::size_t wire = 1;
  for (auto& label : labels) {
    if (label.empty()) return decode_error(DecodeErrorCode::kBadLabelType, "empty label");
    if (label.size() > kMaxLabelLen) {
      return decode_error(DecodeErrorCode::kLabelTooLong,
                          "label of " + std::to_string(label.size()) + " octets");
    }
    label = lowercase(std::move(label));
    wire += 1 + label.size();
  }
  if (wire > kMaxNameLen) {
    return decode_error(DecodeErrorCode::kNameTooLong, "name of " + std::to_string(wire) + " octets");
  }
  DomainName name;
  name.labels_ = std::move(labels);
  return name;
}

Decoded<DomainName> DomainName::parse(std::string_view text) {
  if (text == "." || text.empty()) return DomainName{};
  if (text.back() == '.') text.remove_suffix(1);
  std::vector<std::string> labels;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = text.find('.', start);
    labels.emplace_back(text.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return from_labels(std::move(labels));
}

std::size_t DomainName::wire_length() const {
  std::size_t n = 1;
  for (const auto& label : labels_) n += 1 + label.size();
  return n;
}

std::string DomainName::str() const {
  if (labels_.empty()) return ".";
  std::string out;
  for (const auto& label : labels_) {
    out += label;
    out += '.';
  }
  return out;
}

DnsRecord DnsRecord::a(DomainName name, Ipv4Addr addr, std::uint32_t ttl) {
  return DnsRecord{std::move(name), kDnsTypeA, kDnsClassIn, ttl,
                   Bytes(addr.octets.begin(), addr.octets.end())};
}

namespace {

void put_name(ByteWriter& w, const DomainName& name) {
  for (const auto& label : name.labels()) {
    w.u8(static_cast<std::uint8_t>(label.size()));
    w.bytes(ByteView(reinterpret_cast<const std::uint8_t*>(label.data()), label.size()));
  }
  w.u8(0);
}

// Reads a possibly-compressed name starting at the reader's position. The
// reader is left just past the name as it appears in place (after the first
// pointer, if any).
Decoded<DomainName> read_name(ByteReader& r) {
  const ByteView msg = r.data();
  std::size_t pos = r.pos();
  std::size_t resume = 0;
  bool jumped = false;
  std::set<std::size_t> visited;
  std::vector<std::string> labels;
  std::size_t wire = 1;

  while (true) {
    if (pos >= msg.size()) return decode_error(DecodeErrorCode::kTruncated, "name runs past end");
    const std::uint8_t len = msg[pos];
    if ((len & 0xc0) == 0xc0) {
      if (pos + 1 >= msg.size()) {
        return decode_error(DecodeErrorCode::kTruncated, "compression pointer cut short");
      }
      const std::size_t target = static_cast<std::size_t>(((len & 0x3f) << 8) | msg[pos + 1]);
      if (target >= msg.size()) {
        return decode_error(DecodeErrorCode::kBadPointer,
                            "pointer to offset " + std::to_string(target));
      }
      if (!visited.insert(target).second) {
        return decode_error(DecodeErrorCode::kPointerLoop,
                            "offset " + std::to_string(target) + " revisited");
      }
      if (!jumped) {
        resume = pos + 2;
        jumped = true;
      }
      pos = target;
      continue;
    }
    if ((len & 0xc0) != 0) {
      return decode_error(DecodeErrorCode::kBadLabelType, "label type bits " + std::to_string(len >> 6));
    }
    if (len == 0) {
      ++pos;
      break;
    }
    // Lengths 1..63 are all that fit in six bits, so only the total can overflow.
    if (pos + 1 + len > msg.size()) {
      return decode_error(DecodeErrorCode::kTruncated, "label runs past end");
    }
    wire += 1 + len;
    if (wire > kMaxNameLen) {
      return decode_error(DecodeErrorCode::kNameTooLong, "name exceeds 255 octets");
    }
    labels.emplace_back(reinterpret_cast<const char*>(msg.data() + pos + 1), len);
    pos += 1 + len;
  }
  r.seek(jumped ? resume : pos);
  return DomainName::from_labels(std::move(labels));
}

Decoded<DnsRecord> read_record(ByteReader& r) {
  auto name = read_name(r);
  if (!name) return name.error();
  DnsRecord rec;
  rec.name = std::move(name).value();
  auto rtype = r.u16();
  auto rclass = r.u16();
  auto ttl = r.u32();
  auto rdlength = r.u16();
  if (!rtype || !rclass || !ttl || !rdlength) {
    return decode_error(DecodeErrorCode::kTruncated, "resource record header");
  }
  auto rdata = r.take(*rdlength);
  if (!rdata) return decode_error(DecodeErrorCode::kTruncated, "rdata");
  rec.rtype = *rtype;
  rec.rclass = *rclass;
  rec.ttl = *ttl;
  rec.rdata.assign(rdata->begin(), rdata->end());
  if (rec.rtype == kDnsTypeA && rec.rdata.size() != 4) {
    return decode_error(DecodeErrorCode::kBadRdata,
                        "A record with " + std::to_string(rec.rdata.size()) + " octets");
  }
  return rec;
}

}  // namespace

Decoded<Bytes> encode_dns(const DnsMessage& msg) {
  for (const auto& rec : msg.answers) {
    if (rec.rtype == kDnsTypeA && rec.rdata.size() != 4) {
      return decode_error(DecodeErrorCode::kBadRdata,
                          "A record with " + std::to_string(rec.rdata.size()) + " octets");
    }
  }
  ByteWriter w;
  w.u16(msg.id);
  std::uint16_t flags = 0;
  if (msg.qr == DnsMessage::Kind::kResponse) flags |= 0x8000;
  flags |= static_cast<std::uint16_t>((msg.opcode & 0x0f) << 11);
  if (msg.recursion_desired) flags |= 0x0100;
  if (msg.recursion_available) flags |= 0x0080;
  flags |= static_cast<std::uint16_t>(msg.rcode) & 0x0f;
  w.u16(flags);
  w.u16(static_cast<std::uint16_t>(msg.questions.size()));
  w.u16(static_cast<std::uint16_t>(msg.answers.size()));
  w.u16(0);
  w.u16(0);
  for (const auto& q : msg.questions) {
    put_name(w, q.qname);
    w.u16(q.qtype);
    w.u16(q.qclass);
  }
  for (const auto& rec : msg.answers) {
    put_name(w, rec.name);
    w.u16(rec.rtype);
    w.u16(rec.rclass);
    w.u32(rec.ttl);
    w.u16(static_cast<std::uint16_t>(rec.rdata.size()));
    w.bytes(rec.rdata);
  }
  return std::move(w).take();
}

Decoded<DnsMessage> decode_dns(ByteView wire) {
  if (wire.size() < kDnsHeaderLen) {
    return decode_error(DecodeErrorCode::kTruncated,
                        "dns header needs 12 octets, got " + std::to_string(wire.size()));
  }
  ByteReader r(wire);
  DnsMessage msg;
  msg.id = *r.u16();
  const std::uint16_t flags = *r.u16();
  msg.qr = (flags & 0x8000) ? DnsMessage::Kind::kResponse : DnsMessage::Kind::kQuery;
  msg.opcode = static_cast<std::uint8_t>((flags >> 11) & 0x0f);
  if (msg.opcode != 0) {
    return decode_error(DecodeErrorCode::kBadFlags, "opcode " + std::to_string(msg.opcode));
  }
  msg.recursion_desired = (flags & 0x0100) != 0;
  msg.recursion_available = (flags & 0x0080) != 0;
  const std::uint8_t rcode = flags & 0x0f;
  if (rcode != 0 && rcode != 1 && rcode != 3) {
    return decode_error(DecodeErrorCode::kBadFlags, "rcode " + std::to_string(rcode));
  }
  msg.rcode = static_cast<DnsRcode>(rcode);
  const std::uint16_t qdcount = *r.u16();
  const std::uint16_t ancount = *r.u16();
  const std::uint16_t nscount = *r.u16();
  const std::uint16_t arcount = *r.u16();

  for (std::uint16_t i = 0; i < qdcount; ++i) {
    auto name = read_name(r);
    if (!name) return name.error();
    auto qtype = r.u16();
    auto qclass = r.u16();
    if (!qtype || !qclass) return decode_error(DecodeErrorCode::kTruncated, "question");
    msg.questions.push_back({std::move(name).value(), *qtype, *qclass});
  }
  for (std::uint16_t i = 0; i < ancount; ++i) {
    auto rec = read_record(r);
    if (!rec) return rec.error();
    msg.answers.push_back(std::move(rec).value());
  }
  for (std::uint32_t i = 0; i < std::uint32_t{nscount} + arcount; ++i) {
    auto rec = read_record(r);
    if (!rec) return rec.error();
  }
  if (r.remaining() != 0) {
    return decode_error(DecodeErrorCode::kTrailingData,
                        std::to_string(r.remaining()) + " octets after last record");
  }
  return msg;
}

}  // namespace portalsim::net
