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

#include <string>
#include <string_view>

namespace portalsim::scenario {

enum class CheckStatus { kIdentical, kDiffers, kVersionMismatch };

struct CheckResult {
  CheckStatus status = CheckStatus::kIdentical;
  std::size_t line = 0;  // first divergent line, 1-based
  std::string expected;
  std::string actual;

  std::string message() const;
};

// Line-by-line comparison of a golden trace with a fresh one. A golden whose
// first line is not the current version header is a version mismatch.
CheckResult compare_traces(std::string_view golden, std::string_view actual);

}  // namespace portalsim::scenario
