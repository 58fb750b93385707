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

#include "portalsim/result.hpp"

namespace portalsim::net {

enum class DecodeErrorCode {
  kTruncated,
  kBadEthertype,
  kBadHardwareType,
  kBadArpOp,
  kBadVersion,
  kBadHeaderLength,
  kBadLength,
  kBadChecksum,
  kBadProtocol,
  kBadFlags,
  kLabelTooLong,
  kNameTooLong,
  kPointerLoop,
  kBadPointer,
  kBadLabelType,
  kBadRdata,
  kTrailingData,
  kBadStartLine,
  kBadHeader,
  kBadMethod,
  kBadStatus,
  kBadAddress,
};

std::string_view to_string(DecodeErrorCode code);

struct DecodeError {
  DecodeErrorCode code;
  std::string detail;

  std::string message() const;
};

template <typename T>
using Decoded = Result<T, DecodeError>;

inline DecodeError decode_error(DecodeErrorCode code, std::string detail = {}) {
  return DecodeError{code, std::move(detail)};
}

}  // namespace portalsim::net
