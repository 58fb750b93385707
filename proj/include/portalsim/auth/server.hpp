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

#include <vector>

#include "portalsim/auth/line.hpp"
#include "portalsim/fabric/fabric.hpp"

namespace portalsim::auth {

struct ServerOutcome {
  AuthReply reply;
  // Flow removals caused by an AUTH that changed the table.
  std::vector<fabric::FabricEvent> events;
};

// AUTH authorizes through the fabric and answers OK. QUERY reads the table.
ServerOutcome server_handle_command(fabric::Fabric& fabric, const AuthCommand& cmd);

// Handles one raw line; anything undecodable is answered ERR UNKNOWN.
ServerOutcome server_handle_line(fabric::Fabric& fabric, std::string_view line);

}  // namespace portalsim::auth
