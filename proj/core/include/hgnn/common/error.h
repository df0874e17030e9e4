// Copyright 2026 The hgnn Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hgnn {

// Numeric values travel in RPC error records; do not renumber.
enum class Errc : uint32_t {
  kInvalidArgument = 1,
  kOutOfRange = 2,
  kNotFound = 3,
  kAlreadyExists = 4,
  kCapacityExceeded = 5,
  kParse = 6,
  kIo = 7,
  kTransport = 8,
  kFailedPrecondition = 9,
  kDataLoss = 10,
  kUnimplemented = 11,
  kInternal = 12,
};

std::string_view ErrcName(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void Throw(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace hgnn
