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

#include "portalsim/portal/portal.hpp"

#include <algorithm>
#include <cctype>

namespace portalsim::portal {

std::string_view to_string(CaptureTechnique technique) {
  return technique == CaptureTechnique::kDnsSpoofing ? "dns-spoofing" : "ip-forgery";
}

std::optional<CaptureTechnique> parse_technique(std::string_view text) {
  if (text == "dns-spoofing") return CaptureTechnique::kDnsSpoofing;
  if (text == "ip-forgery") return CaptureTechnique::kIpForgery;
  return std::nullopt;
}

net::HttpResponse make_response(std::uint16_t status, std::string body) {
  net::HttpResponse r;
  r.status = status;
  r.headers.emplace_back("Content-Type", "text/plain");
  r.headers.emplace_back("Content-Length", std::to_string(body.size()));
  r.body = std::move(body);
  return r;
}

std::string login_action(const PortalConfig& config) {
  const std::string host = config.technique == CaptureTechnique::kDnsSpoofing
                               ? config.portal_ip.str()
                               : config.portal_domain;
  return "http://" + host + "/login";
}

std::string login_page(const PortalConfig& config) {
  return std::string(kLoginMarker) + "\nform action=" + login_action(config) +
         " fields=username,password\n";
}

std::string request_host(const net::HttpRequest& req) {
  std::string h = req.host();
  if (auto colon = h.find(':'); colon != std::string::npos) h.resize(colon);
  std::transform(h.begin(), h.end(), h.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (!h.empty() && h.back() == '.') h.pop_back();
  return h;
}

namespace {

net::HttpResponse redirect_to(const PortalConfig& config) {
  auto r = make_response(302, "");
  r.headers.emplace_back("Location", "http://" + config.portal_domain + "/");
  return r;
}

bool off_portal(const PortalConfig& config, const net::HttpRequest& req) {
  return request_host(req) != config.portal_domain;
}

}  // namespace

net::HttpResponse handle_http(const PortalConfig& config, const PortalSession& client,
                              const net::HttpRequest& req) {
  if (config.technique == CaptureTechnique::kIpForgery &&
      client.state == SessionState::kCaptive && off_portal(config, req)) {
    return redirect_to(config);
  }
  if (req.method == net::HttpMethod::kGet && req.path == "/") {
    if (client.state == SessionState::kLoggedIn) {
      return make_response(200, std::string(kAlreadyMarker) + "\n");
    }
    return make_response(200, login_page(config));
  }
  return make_response(404, "NOT-FOUND\n");
}

LoginOutcome handle_login(PortalSession& client, const net::HttpRequest& req,
                          const CredentialStore& creds) {
  std::optional<std::string> user, password;
  for (auto& [k, v] : net::parse_form(req.body)) {
    if (k == "username") user = v;
    if (k == "password") password = v;
  }
  if (!user || !password) return {make_response(400, "BAD-REQUEST\n"), std::nullopt};
  if (!creds.check(*user, *password)) {
    return {make_response(403, std::string(kLoginFailedMarker) + "\n"), std::nullopt};
  }
  if (client.state == SessionState::kLoggedIn) {
    return {make_response(200, std::string(kLoginOkMarker) + "\n"), std::nullopt};
  }
  client.state = SessionState::kLoggedIn;
  return {make_response(200, std::string(kLoginOkMarker) + "\n"),
          auth::AuthCommand{auth::Verb::kAuth, client.client_mac}};
}

void Portal::reset_session(const net::MacAddr& mac) {
  if (auto it = sessions_.find(mac); it != sessions_.end()) it->second.state = SessionState::kCaptive;
}

const PortalSession* Portal::session(const net::MacAddr& mac) const {
  auto it = sessions_.find(mac);
  return it == sessions_.end() ? nullptr : &it->second;
}

LoginOutcome Portal::dispatch(const net::MacAddr& mac, const net::Ipv4Addr& ip,
                              const net::Decoded<net::HttpMessage>& request) {
  if (!request || !std::holds_alternative<net::HttpRequest>(*request)) {
    return {make_response(400, "BAD-REQUEST\n"), std::nullopt};
  }
  return dispatch(mac, ip, std::get<net::HttpRequest>(*request));
}

LoginOutcome Portal::dispatch(const net::MacAddr& mac, const net::Ipv4Addr& ip,
                              const net::HttpRequest& req) {
  auto it = sessions_.try_emplace(mac, PortalSession{mac, ip, SessionState::kCaptive}).first;
  PortalSession& s = it->second;
  s.client_ip = ip;

  const bool redirected = config_.technique == CaptureTechnique::kIpForgery &&
                          s.state == SessionState::kCaptive && off_portal(config_, req);
  if (!redirected && req.method == net::HttpMethod::kPost && req.path == "/login") {
    return handle_login(s, req, creds_);
  }
  return {handle_http(config_, s, req), std::nullopt};
}

}  // namespace portalsim::portal
