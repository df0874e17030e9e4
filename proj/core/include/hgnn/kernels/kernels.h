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


// Building-block kernels, each available as three software backends:
//   scalar  plain loops ("CPU")
//   lane    column blocks of `lanes` accumulators ("Vector processor")
//   tile    output-stationary tiles filled by a systolic wavefront
//           ("Systolic array")
// Every backend accumulates in ascending reduction index, so each one is
// deterministic on its own.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hgnn/batchprep/sampler.h"
#include "hgnn/kernels/tensor.h"

namespace hgnn {

enum class Backend : uint8_t { kScalar, kLane, kTile };

struct BackendParams {
  Backend kind = Backend::kScalar;
  uint32_t lanes = 8;
  uint32_t tile = 4;
};

struct DeviceProfile {
  std::string name;
  int64_t priority = 0;
  std::map<std::string, int64_t> params;  // e.g. lanes, tile

  // Throws kInvalidArgument on an empty name or a non-positive parameter.
  void Validate() const;
  BackendParams ParamsFor(Backend kind) const;

  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

const char* BackendName(Backend b);

Tensor Gemm(const Tensor& a, const Tensor& b, const BackendParams& backend = {});

enum class EwOp : uint8_t { kAdd, kMul, kRelu, kIdentity };
// `b` is required for kAdd and kMul and ignored otherwise.
Tensor Elementwise(EwOp op, const Tensor& a, const Tensor* b = nullptr,
                   const BackendParams& backend = {});

enum class ReduceOp : uint8_t { kSum, kMean, kMax };
Tensor Reduce(ReduceOp op, const Tensor& a, size_t axis, const BackendParams& backend = {});

// Aggregation over one sampled layer; output has layer.num_dst rows. For an
// edge j -> i with degrees d:
//   gcn_mean  i == j: x_i / d_i           else x_j / sqrt(d_j d_i)
//   gin_sum   i == j: (1 + eps) x_i       else x_j
//   ngcf      i == j: (x_i + x_i*x_i)/d_i else (x_j + x_j*x_i) / sqrt(d_j d_i)
enum class SpmmMode : uint8_t { kGcnMean, kGinSum, kNgcf };
Tensor Spmm(SpmmMode mode, const LayerGraph& layer, const Tensor& x, float eps = 0.0f,
            const BackendParams& backend = {});

// out[e] = <a_i, b_j> for the e-th edge j -> i, in col_idx order.
std::vector<float> Sddmm(const LayerGraph& layer, const Tensor& a, const Tensor& b,
                         const BackendParams& backend = {});

}  // namespace hgnn
