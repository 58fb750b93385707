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

#include "portalsim/scenario/check.hpp"

#include <vector>

#include "portalsim/sim/trace.hpp"

namespace portalsim::scenario {

namespace {

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

}  // namespace

std::string CheckResult::message() const {
  switch (status) {
    case CheckStatus::kIdentical: return "traces identical";
    case CheckStatus::kVersionMismatch:
      return "version header mismatch: golden has '" + expected + "', expected '" +
             std::string(sim::kTraceHeader) + "'";
    case CheckStatus::kDiffers: break;
  }
  return "first difference at line " + std::to_string(line) + "\n- golden: " + expected +
         "\n+ actual: " + actual;
}

CheckResult compare_traces(std::string_view golden, std::string_view actual) {
  const auto want = lines_of(golden);
  const auto got = lines_of(actual);
  CheckResult r;
  if (want.empty() || want.front() != sim::kTraceHeader) {
    r.status = CheckStatus::kVersionMismatch;
    r.line = 1;
    r.expected = want.empty() ? "" : std::string(want.front());
    return r;
  }
  const std::size_t n = std::max(want.size(), got.size());
  for (std::size_t i = 0; i < n; ++i) {
    const bool have_w = i < want.size();
    const bool have_g = i < got.size();
    if (have_w && have_g && want[i] == got[i]) continue;
    r.status = CheckStatus::kDiffers;
    r.line = i + 1;
    r.expected = have_w ? std::string(want[i]) : "<end of trace>";
    r.actual = have_g ? std::string(got[i]) : "<end of trace>";
    return r;
  }
  return r;
}

}  // namespace portalsim::scenario
