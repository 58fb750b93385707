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

#include "portalsim/auth/server.hpp"

namespace portalsim::auth {

ServerOutcome server_handle_command(fabric::Fabric& fabric, const AuthCommand& cmd) {
  if (cmd.verb == Verb::kAuth) return {AuthReply::ok(), fabric.authorize_mac(cmd.mac)};
  return {AuthReply::ok_state(fabric.controller().auth_table().is_authorized(cmd.mac)), {}};
}

ServerOutcome server_handle_line(fabric::Fabric& fabric, std::string_view line) {
  auto cmd = decode_command_line(line);
  if (!cmd) return {AuthReply::unknown(), {}};
  return server_handle_command(fabric, *cmd);
}

}  // namespace portalsim::auth
