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

#include "portalsim/auth/line.hpp"

namespace portalsim::auth {

std::string_view to_string(Verb verb) { return verb == Verb::kAuth ? "AUTH" : "QUERY"; }

std::string_view to_string(LineErrorCode code) {
  switch (code) {
    case LineErrorCode::kMissingNewline: return "missing-newline";
    case LineErrorCode::kUnknownVerb: return "unknown-verb";
    case LineErrorCode::kBadMac: return "bad-mac";
    case LineErrorCode::kBadSyntax: return "bad-syntax";
  }
  return "?";
}

std::string LineError::message() const {
  std::string s(to_string(code));
  if (!detail.empty()) s += ": " + detail;
  return s;
}

std::string encode_auth_line(const AuthCommand& cmd) {
  return std::string(to_string(cmd.verb)) + " " + cmd.mac.str() + "\n";
}

std::string encode_auth_line(const AuthReply& reply) {
  if (reply.status == AuthReply::Status::kUnknown) return "ERR UNKNOWN\n";
  if (!reply.state) return "OK\n";
  return *reply.state == AuthReply::State::kAuthorized ? "OK AUTHORIZED\n" : "OK UNAUTHORIZED\n";
}

namespace {

template <typename T>
Parsed<T> fail(LineErrorCode code, std::string detail) {
  return LineError{code, std::move(detail)};
}

// Strips the single trailing LF; rejects embedded ones.
std::optional<std::string_view> body_of(std::string_view line) {
  if (line.empty() || line.back() != '\n') return std::nullopt;
  line.remove_suffix(1);
  if (line.find('\n') != std::string_view::npos) return std::nullopt;
  return line;
}

}  // namespace

Parsed<AuthCommand> decode_command_line(std::string_view line) {
  auto body = body_of(line);
  if (!body) return fail<AuthCommand>(LineErrorCode::kMissingNewline, std::string(line));
  auto sp = body->find(' ');
  if (sp == std::string_view::npos)
    return fail<AuthCommand>(LineErrorCode::kBadSyntax, std::string(*body));
  const auto verb_text = body->substr(0, sp);
  Verb verb;
  if (verb_text == "AUTH") {
    verb = Verb::kAuth;
  } else if (verb_text == "QUERY") {
    verb = Verb::kQuery;
  } else {
    return fail<AuthCommand>(LineErrorCode::kUnknownVerb, std::string(verb_text));
  }
  const auto mac_text = body->substr(sp + 1);
  auto mac = net::MacAddr::parse(mac_text);
  // Canonical text only, so encode/decode stay mutually inverse.
  if (!mac || mac->str() != mac_text)
    return fail<AuthCommand>(LineErrorCode::kBadMac, std::string(mac_text));
  return AuthCommand{verb, *mac};
}

Parsed<AuthReply> decode_reply_line(std::string_view line) {
  auto body = body_of(line);
  if (!body) return fail<AuthReply>(LineErrorCode::kMissingNewline, std::string(line));
  if (*body == "OK") return AuthReply::ok();
  if (*body == "OK AUTHORIZED") return AuthReply::ok_state(true);
  if (*body == "OK UNAUTHORIZED") return AuthReply::ok_state(false);
  if (*body == "ERR UNKNOWN") return AuthReply::unknown();
  return fail<AuthReply>(LineErrorCode::kBadSyntax, std::string(*body));
}

std::optional<std::string> LineBuffer::next() {
  auto lf = buf_.find('\n');
  if (lf == std::string::npos) return std::nullopt;
  std::string line = buf_.substr(0, lf + 1);
  buf_.erase(0, lf + 1);
  return line;
}

}  // namespace portalsim::auth
