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
#include <string>
#include <string_view>

#include "portalsim/auth/line.hpp"
#include "portalsim/net/addr.hpp"
#include "portalsim/net/http.hpp"

namespace portalsim::portal {

enum class CaptureTechnique { kDnsSpoofing, kIpForgery };
std::string_view to_string(CaptureTechnique technique);
std::optional<CaptureTechnique> parse_technique(std::string_view text);

// Stable markers so traces and tests can assert on page content.
inline constexpr std::string_view kLoginMarker = "CAPTIVE-PORTAL-LOGIN";
inline constexpr std::string_view kAlreadyMarker = "ALREADY-AUTHORIZED";
inline constexpr std::string_view kLoginOkMarker = "LOGIN-OK";
inline constexpr std::string_view kLoginFailedMarker = "LOGIN-FAILED";

class CredentialStore {
 public:
  void add(std::string user, std::string password) {
    users_.insert_or_assign(std::move(user), std::move(password));
  }
  bool check(std::string_view user, std::string_view password) const {
    auto it = users_.find(std::string(user));
    return it != users_.end() && it->second == password;
  }
  const std::map<std::string, std::string>& users() const { return users_; }

 private:
  std::map<std::string, std::string> users_;
};

enum class SessionState { kCaptive, kLoggedIn };

struct PortalSession {
  net::MacAddr client_mac;
  net::Ipv4Addr client_ip;
  SessionState state = SessionState::kCaptive;
};

struct PortalConfig {
  CaptureTechnique technique = CaptureTechnique::kDnsSpoofing;
  net::Ipv4Addr portal_ip;
  std::string portal_domain = "portal.local";
};

// Where the login form posts. Under DNS spoofing the portal's name would be
// answered like any other, so the form uses the address literal.
std::string login_action(const PortalConfig& config);
std::string login_page(const PortalConfig& config);

// Host header without port, lowercased.
std::string request_host(const net::HttpRequest& req);

// Routing for everything except a login POST.
net::HttpResponse handle_http(const PortalConfig& config, const PortalSession& client,
                              const net::HttpRequest& req);

struct LoginOutcome {
  net::HttpResponse response;
  std::optional<auth::AuthCommand> command;
};

// Validates credentials. A session that is already logged in gets LOGIN-OK
// again without a second command.
LoginOutcome handle_login(PortalSession& client, const net::HttpRequest& req,
                          const CredentialStore& creds);

// Session table plus dispatch over raw request text.
class Portal {
 public:
  Portal(PortalConfig config, CredentialStore creds)
      : config_(std::move(config)), creds_(std::move(creds)) {}

  // `request` is the parse result of one complete request; parse failures and
  // responses are answered 400.
  LoginOutcome dispatch(const net::MacAddr& mac, const net::Ipv4Addr& ip,
                        const net::Decoded<net::HttpMessage>& request);
  LoginOutcome dispatch(const net::MacAddr& mac, const net::Ipv4Addr& ip,
                        const net::HttpRequest& req);

  // Back to captive when the controller could not be told.
  void reset_session(const net::MacAddr& mac);

  const PortalConfig& config() const { return config_; }
  const CredentialStore& credentials() const { return creds_; }
  const PortalSession* session(const net::MacAddr& mac) const;
  const std::map<net::MacAddr, PortalSession>& sessions() const { return sessions_; }

 private:
  PortalConfig config_;
  CredentialStore creds_;
  std::map<net::MacAddr, PortalSession> sessions_;
};

net::HttpResponse make_response(std::uint16_t status, std::string body);

}  // namespace portalsim::portal
