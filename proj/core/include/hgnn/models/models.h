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


// Prebuilt GCN, GIN and NGCF dataflow graphs and an independent dense
// evaluator for them.
//
// Each of the k layers is SpMM -> GEMM -> ReLU; GIN layers carry a two-matrix
// MLP, SpMM -> GEMM -> ReLU -> GEMM -> ReLU. Weight inputs are named
// "Weight" when the model has a single matrix and "Weight_1".."Weight_m"
// otherwise, in layer order.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hgnn/batchprep/sampler.h"
#include "hgnn/dfg/dfg.h"
#include "hgnn/kernels/tensor.h"
#include "hgnn/runner/value.h"

namespace hgnn {

enum class ModelKind : uint32_t { kGcn = 1, kGin = 2, kNgcf = 3 };

const char* ModelKindName(ModelKind kind);
// Accepts "gcn", "gin", "ngcf" in any case; throws kInvalidArgument.
ModelKind ParseModelKind(std::string_view name);

struct ModelConfig {
  ModelKind kind = ModelKind::kGcn;
  uint32_t layers = 2;
  uint32_t feature_len = 0;
  std::vector<uint32_t> hidden;  // output width of each layer
  float eps = 0.0f;              // GIN self-weight
  std::vector<Tensor> weights;   // layer order; GIN: two per layer

  uint32_t WeightsPerLayer() const { return kind == ModelKind::kGin ? 2 : 1; }
  uint32_t InputWidth(uint32_t layer) const;  // 0-based layer
  std::vector<std::string> WeightNames() const;
  // Throws kInvalidArgument when shapes do not chain.
  void Validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Seeded weights uniform in [-1/sqrt(in), 1/sqrt(in)].
ModelConfig RandomModel(ModelKind kind, uint32_t layers, uint32_t feature_len,
                        std::vector<uint32_t> hidden, uint64_t seed, float eps = 0.0f);

inline constexpr std::string_view kBatchInput = "Batch";
inline constexpr std::string_view kEpsilonInput = "Epsilon";
inline constexpr std::string_view kResultOutput = "Result";

DataflowGraph BuildDfg(const ModelConfig& cfg);
// Input map for BuildDfg(cfg): the batch plus every weight and, for GIN, eps.
std::map<std::string, Value> BuildInputs(const ModelConfig& cfg, Value batch);

// Per-node double-precision evaluation over dense layer adjacency.
Tensor DenseReference(const ModelConfig& cfg, const SampledBatch& batch);

// Weight file: magic "HGNNWGT\0", version u32, kind u32, layers u32,
// feature_len u32, eps f32, hidden[layers] u32, then each weight matrix as
// row-major little-endian f32.
std::vector<uint8_t> EncodeWeights(const ModelConfig& cfg);
ModelConfig DecodeWeights(std::span<const uint8_t> bytes);
void SaveWeights(const std::string& path, const ModelConfig& cfg);
ModelConfig LoadWeights(const std::string& path);

}  // namespace hgnn
