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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "portalsim/net/bytes.hpp"
#include "portalsim/net/decode_error.hpp"

namespace portalsim::net {

inline constexpr std::uint16_t kHttpPort = 80;

enum class HttpMethod { kGet, kPost };
std::string_view to_string(HttpMethod method);

// Header names are kept as written; lookups are case-insensitive. Order is
// preserved so rendering is stable.
using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

std::optional<std::string_view> find_header(const HttpHeaders& headers, std::string_view name);

struct HttpRequest {
  HttpMethod method = HttpMethod::kGet;
  std::string path = "/";
  HttpHeaders headers;
  std::string body;

  std::string host() const;

  bool operator==(const HttpRequest&) const = default;
};

struct HttpResponse {
  std::uint16_t status = 200;
  HttpHeaders headers;
  std::string body;

  std::optional<std::string> location() const;

  bool operator==(const HttpResponse&) const = default;
};

using HttpMessage = std::variant<HttpRequest, HttpResponse>;

std::string_view reason_phrase(std::uint16_t status);

// CRLF-delimited HTTP/1.1. A Content-Length header is added when a body is
// present and none was supplied.
std::string render_http(const HttpMessage& msg);

// Parses exactly one complete message. Incomplete input (missing blank line or
// fewer body octets than Content-Length) is a truncation error.
Decoded<HttpMessage> parse_http(std::string_view text);

// Number of octets forming the first complete message in `text`, or nullopt
// while more input is needed. Used by stream reassembly.
std::optional<std::size_t> complete_http_length(std::string_view text);

// application/x-www-form-urlencoded, percent-decoding keys and values.
std::vector<std::pair<std::string, std::string>> parse_form(std::string_view body);
std::string encode_form(const std::vector<std::pair<std::string, std::string>>& fields);

struct HttpUrl {
  std::string host;
  std::uint16_t port = kHttpPort;
  std::string path = "/";

  std::string str() const;
};

// "http://<host>[:port][/path]" only.
std::optional<HttpUrl> parse_url(std::string_view url);

}  // namespace portalsim::net
