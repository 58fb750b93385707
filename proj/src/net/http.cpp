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

#include "portalsim/net/http.hpp"

#include <charconv>
#include <cstdio>

namespace portalsim::net {

namespace {

constexpr std::string_view kCrlf = "\r\n";

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool is_token_char(char c) {
  if (c <= 32 || c >= 127) return false;
  constexpr std::string_view separators = "()<>@,;:\\\"/[]?={}";
  return separators.find(c) == std::string_view::npos;
}

std::optional<std::size_t> parse_size(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

void render_headers(std::string& out, const HttpHeaders& headers, const std::string& body) {
  bool has_length = false;
  for (const auto& [name, value] : headers) {
    if (iequals(name, "Content-Length")) has_length = true;
    out += name;
    out += ": ";
    out += value;
    out += kCrlf;
  }
  if (!body.empty() && !has_length) {
    out += "Content-Length: " + std::to_string(body.size());
    out += kCrlf;
  }
  out += kCrlf;
  out += body;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out += ' ';
    } else if (s[i] == '%' && i + 2 < s.size() && hex_digit(s[i + 1]) >= 0 &&
               hex_digit(s[i + 2]) >= 0) {
      out += static_cast<char>(hex_digit(s[i + 1]) * 16 + hex_digit(s[i + 2]));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string percent_encode(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    const bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                       c == '-' || c == '_' || c == '.' || c == '~';
    if (plain) {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(HttpMethod method) {
  return method == HttpMethod::kGet ? "GET" : "POST";
}

std::optional<std::string_view> find_header(const HttpHeaders& headers, std::string_view name) {
  for (const auto& [key, value] : headers) {
    if (iequals(key, name)) return std::string_view(value);
  }
  return std::nullopt;
}

std::string HttpRequest::host() const {
  auto h = find_header(headers, "Host");
  return h ? std::string(*h) : std::string();
}

std::optional<std::string> HttpResponse::location() const {
  auto h = find_header(headers, "Location");
  if (!h) return std::nullopt;
  return std::string(*h);
}

std::string_view reason_phrase(std::uint16_t status) {
  switch (status) {
    case 200: return "OK";
    case 302: return "Found";
    case 400: return "Bad Request";
    case 403: return "Forbidden";
    case 404: return "Not Found";
    case 503: return "Service Unavailable";
    default: return "Unknown";
  }
}

std::string render_http(const HttpMessage& msg) {
  std::string out;
  if (const auto* req = std::get_if<HttpRequest>(&msg)) {
    out += to_string(req->method);
    out += ' ';
    out += req->path;
    out += " HTTP/1.1";
    out += kCrlf;
    render_headers(out, req->headers, req->body);
  } else {
    const auto& resp = std::get<HttpResponse>(msg);
    out += "HTTP/1.1 " + std::to_string(resp.status) + " ";
    out += reason_phrase(resp.status);
    out += kCrlf;
    render_headers(out, resp.headers, resp.body);
  }
  return out;
}

std::optional<std::size_t> complete_http_length(std::string_view text) {
  const std::size_t head_end = text.find("\r\n\r\n");
  if (head_end == std::string_view::npos) return std::nullopt;
  std::size_t body_len = 0;
  std::string_view head = text.substr(0, head_end);
  std::size_t line_start = head.find(kCrlf);
  while (line_start != std::string_view::npos) {
    line_start += 2;
    std::size_t line_end = head.find(kCrlf, line_start);
    std::string_view line = head.substr(line_start, line_end == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : line_end - line_start);
    const std::size_t colon = line.find(':');
    if (colon != std::string_view::npos && iequals(trim(line.substr(0, colon)), "Content-Length")) {
      // A malformed value completes the head; the parser reports the error.
      body_len = parse_size(trim(line.substr(colon + 1))).value_or(0);
    }
    line_start = line_end;
  }
  const std::size_t total = head_end + 4 + body_len;
  if (text.size() < total) return std::nullopt;
  return total;
}

Decoded<HttpMessage> parse_http(std::string_view text) {
  const std::size_t head_end = text.find("\r\n\r\n");
  if (head_end == std::string_view::npos) {
    return decode_error(DecodeErrorCode::kTruncated, "no blank line after headers");
  }
  std::string_view head = text.substr(0, head_end);
  std::string_view rest = text.substr(head_end + 4);

  const std::size_t first_end = head.find(kCrlf);
  std::string_view start = head.substr(0, first_end);
  std::string_view header_block =
      first_end == std::string_view::npos ? std::string_view{} : head.substr(first_end + 2);

  HttpHeaders headers;
  std::optional<std::size_t> content_length;
  while (!header_block.empty()) {
    const std::size_t end = header_block.find(kCrlf);
    std::string_view line = header_block.substr(0, end);
    header_block = end == std::string_view::npos ? std::string_view{} : header_block.substr(end + 2);
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0) {
      return decode_error(DecodeErrorCode::kBadHeader, std::string(line));
    }
    std::string_view name = line.substr(0, colon);
    for (char c : name) {
      if (!is_token_char(c)) return decode_error(DecodeErrorCode::kBadHeader, std::string(line));
    }
    std::string_view value = trim(line.substr(colon + 1));
    if (iequals(name, "Content-Length")) {
      content_length = parse_size(value);
      if (!content_length) {
        return decode_error(DecodeErrorCode::kBadHeader, "Content-Length: " + std::string(value));
      }
    }
    headers.emplace_back(std::string(name), std::string(value));
  }

  const std::size_t body_len = content_length.value_or(0);
  if (rest.size() < body_len) {
    return decode_error(DecodeErrorCode::kTruncated, "body shorter than Content-Length");
  }
  if (rest.size() > body_len) {
    return decode_error(DecodeErrorCode::kTrailingData, "octets past Content-Length");
  }
  std::string body(rest);

  if (start.starts_with("HTTP/1.1 ")) {
    std::string_view code = start.substr(9, 3);
    std::uint16_t status = 0;
    auto [ptr, ec] = std::from_chars(code.data(), code.data() + code.size(), status);
    if (ec != std::errc{} || ptr != code.data() + 3 || status < 100 || status > 599 ||
        (start.size() > 12 && start[12] != ' ')) {
      return decode_error(DecodeErrorCode::kBadStatus, std::string(start));
    }
    return HttpMessage{HttpResponse{status, std::move(headers), std::move(body)}};
  }

  const std::size_t sp1 = start.find(' ');
  const std::size_t sp2 = sp1 == std::string_view::npos ? sp1 : start.find(' ', sp1 + 1);
  if (sp2 == std::string_view::npos || start.substr(sp2 + 1) != "HTTP/1.1") {
    return decode_error(DecodeErrorCode::kBadStartLine, std::string(start));
  }
  std::string_view method = start.substr(0, sp1);
  std::string_view path = start.substr(sp1 + 1, sp2 - sp1 - 1);
  HttpRequest req;
  if (method == "GET") {
    req.method = HttpMethod::kGet;
  } else if (method == "POST") {
    req.method = HttpMethod::kPost;
  } else {
    return decode_error(DecodeErrorCode::kBadMethod, std::string(method));
  }
  if (path.empty() || path.front() != '/' || path.find(' ') != std::string_view::npos) {
    return decode_error(DecodeErrorCode::kBadStartLine, "request target " + std::string(path));
  }
  req.path = std::string(path);
  req.headers = std::move(headers);
  req.body = std::move(body);
  return HttpMessage{std::move(req)};
}

std::vector<std::pair<std::string, std::string>> parse_form(std::string_view body) {
  std::vector<std::pair<std::string, std::string>> out;
  while (!body.empty()) {
    const std::size_t amp = body.find('&');
    std::string_view pair = body.substr(0, amp);
    body = amp == std::string_view::npos ? std::string_view{} : body.substr(amp + 1);
    if (pair.empty()) continue;
    const std::size_t eq = pair.find('=');
    if (eq == std::string_view::npos) {
      out.emplace_back(percent_decode(pair), std::string());
    } else {
      out.emplace_back(percent_decode(pair.substr(0, eq)), percent_decode(pair.substr(eq + 1)));
    }
  }
  return out;
}

std::string encode_form(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string out;
  for (const auto& [key, value] : fields) {
    if (!out.empty()) out += '&';
    out += percent_encode(key);
    out += '=';
    out += percent_encode(value);
  }
  return out;
}

std::string HttpUrl::str() const {
  std::string out = "http://" + host;
  if (port != kHttpPort) out += ":" + std::to_string(port);
  out += path;
  return out;
}

std::optional<HttpUrl> parse_url(std::string_view url) {
  constexpr std::string_view scheme = "http://";
  if (!url.starts_with(scheme)) return std::nullopt;
  url.remove_prefix(scheme.size());
  const std::size_t slash = url.find('/');
  std::string_view authority = url.substr(0, slash);
  HttpUrl out;
  out.path = slash == std::string_view::npos ? "/" : std::string(url.substr(slash));
  const std::size_t colon = authority.find(':');
  if (colon != std::string_view::npos) {
    std::uint16_t port = 0;
    auto digits = authority.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || port == 0) return std::nullopt;
    out.port = port;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) return std::nullopt;
  for (char c : authority) {
    if (c <= 32 || c >= 127 || c == '@') return std::nullopt;
  }
  out.host = std::string(authority);
  for (auto& c : out.host) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace portalsim::net
