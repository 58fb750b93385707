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

#include <map>
#include <optional>

#include "portalsim/net/addr.hpp"
#include "portalsim/net/dns.hpp"

namespace portalsim::dns {

// Static A-record table. Names absent from the map are NXDomain.
class ZoneDb {
 public:
  ZoneDb() = default;

  void add(net::DomainName name, net::Ipv4Addr addr) { records_.insert_or_assign(std::move(name), addr); }
  std::optional<net::Ipv4Addr> lookup(const net::DomainName& name) const {
    auto it = records_.find(name);
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }
  const std::map<net::DomainName, net::Ipv4Addr>& records() const { return records_; }

 private:
  std::map<net::DomainName, net::Ipv4Addr> records_;
};

}  // namespace portalsim::dns
