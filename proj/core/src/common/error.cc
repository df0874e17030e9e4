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

#include "hgnn/common/error.h"

namespace hgnn {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid_argument";
    case Errc::kOutOfRange: return "out_of_range";
    case Errc::kNotFound: return "not_found";
    case Errc::kAlreadyExists: return "already_exists";
    case Errc::kCapacityExceeded: return "capacity_exceeded";
    case Errc::kParse: return "parse_error";
    case Errc::kIo: return "io_error";
    case Errc::kTransport: return "transport_error";
    case Errc::kFailedPrecondition: return "failed_precondition";
    case Errc::kDataLoss: return "data_loss";
    case Errc::kUnimplemented: return "unimplemented";
    case Errc::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace hgnn
