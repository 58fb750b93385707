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

#include "portalsim/net/addr.hpp"

namespace portalsim::fabric {

enum class AuthState { kUnauthorized, kAuthorized };

// MAC -> authorization state. Absent entries are Unauthorized, and the only
// transition is Unauthorized -> Authorized.
class AuthTable {
 public:
  AuthState state(const net::MacAddr& mac) const {
    auto it = entries_.find(mac);
    return it == entries_.end() ? AuthState::kUnauthorized : it->second;
  }
  bool is_authorized(const net::MacAddr& mac) const { return state(mac) == AuthState::kAuthorized; }
  std::size_t authorized_count() const { return entries_.size(); }
  const std::map<net::MacAddr, AuthState>& entries() const { return entries_; }

 private:
  friend class Controller;

  // Returns true when the state changed.
  bool authorize(const net::MacAddr& mac) {
    return entries_.insert_or_assign(mac, AuthState::kAuthorized).second;
  }

  std::map<net::MacAddr, AuthState> entries_;
};

}  // namespace portalsim::fabric
