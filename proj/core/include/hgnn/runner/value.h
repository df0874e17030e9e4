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

#include <variant>

#include "hgnn/batchprep/sampler.h"
#include "hgnn/kernels/tensor.h"

namespace hgnn {

struct Scalar {
  double value = 0.0;
  friend bool operator==(const Scalar&, const Scalar&) = default;
};

// Payload carried by one dataflow-graph edge.
using Value = std::variant<Tensor, SampledBatch, BatchRequest, Scalar>;

const char* ValueKindName(const Value& v);

}  // namespace hgnn
