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

#include <optional>
#include <string>
#include <string_view>

#include "portalsim/net/addr.hpp"
#include "portalsim/result.hpp"

namespace portalsim::auth {

inline constexpr std::uint16_t kAuthPort = 7000;

enum class Verb { kAuth, kQuery };
std::string_view to_string(Verb verb);

struct AuthCommand {
  Verb verb = Verb::kAuth;
  net::MacAddr mac;

  bool operator==(const AuthCommand&) const = default;
};

struct AuthReply {
  enum class Status { kOk, kUnknown };
  enum class State { kAuthorized, kUnauthorized };

  Status status = Status::kOk;
  std::optional<State> state;

  static AuthReply ok() { return {}; }
  static AuthReply unknown() { return {Status::kUnknown, std::nullopt}; }
  static AuthReply ok_state(bool authorized) {
    return {Status::kOk, authorized ? State::kAuthorized : State::kUnauthorized};
  }

  bool operator==(const AuthReply&) const = default;
};

enum class LineErrorCode { kMissingNewline, kUnknownVerb, kBadMac, kBadSyntax };
std::string_view to_string(LineErrorCode code);

struct LineError {
  LineErrorCode code;
  std::string detail;

  std::string message() const;
};

template <typename T>
using Parsed = Result<T, LineError>;

// "<VERB> <mac>\n"
std::string encode_auth_line(const AuthCommand& cmd);
// "OK\n", "OK AUTHORIZED\n", "OK UNAUTHORIZED\n" or "ERR UNKNOWN\n"
std::string encode_auth_line(const AuthReply& reply);

// Each takes one line including its terminating LF and nothing after it.
Parsed<AuthCommand> decode_command_line(std::string_view line);
Parsed<AuthReply> decode_reply_line(std::string_view line);

// Splits a byte stream into LF-terminated lines.
class LineBuffer {
 public:
  void append(std::string_view data) { buf_.append(data); }
  // Next complete line including its LF, if any.
  std::optional<std::string> next();
  bool empty() const { return buf_.empty(); }

 private:
  std::string buf_;
};

}  // namespace portalsim::auth
