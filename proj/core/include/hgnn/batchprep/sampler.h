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


// Batch preprocessing: layered uniform neighbor sampling, reindexing in
// sampling order, per-layer subgraph construction and embedding gathering.

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "hgnn/graphstore/graph_store.h"

namespace hgnn {

struct BatchRequest {
  std::vector<Vid> targets;
  std::vector<uint32_t> fanouts;  // s_1..s_k, outermost hop first
  uint64_t seed = 0;
  // When set, the self-node counts toward each fanout instead of being added
  // on top of it.
  bool count_self_in_fanout = false;

  friend bool operator==(const BatchRequest&, const BatchRequest&) = default;
};

// One hop of the sampled subgraph. Destinations are new ids [0, num_dst);
// sources are new ids [0, num_src) with num_dst <= num_src.
struct LayerGraph {
  uint32_t num_dst = 0;
  uint32_t num_src = 0;
  std::vector<uint32_t> row_ptr;  // num_dst + 1 entries
  std::vector<uint32_t> col_idx;
  std::vector<uint32_t> deg;      // full-graph degree incl. self, per source id

  size_t num_edges() const { return col_idx.size(); }
  // Throws kInvalidArgument when the CSR arrays are inconsistent.
  void Validate() const;

  friend bool operator==(const LayerGraph&, const LayerGraph&) = default;
};

struct SampledBatch {
  std::vector<Vid> original_ids;   // new id -> original VID
  std::map<Vid, uint32_t> new_ids; // original VID -> new id
  // layers[0] is the outermost hop; the last layer ends at the targets.
  std::vector<LayerGraph> layers;
  uint32_t feature_len = 0;
  std::vector<float> embeddings;   // [num_sampled x feature_len], by new id
  uint64_t io_pages = 0;           // pages read while sampling and gathering

  uint32_t num_sampled() const { return static_cast<uint32_t>(original_ids.size()); }
  uint32_t num_targets() const { return layers.empty() ? 0 : layers.back().num_dst; }

  friend bool operator==(const SampledBatch& a, const SampledBatch& b) {
    return a.original_ids == b.original_ids && a.new_ids == b.new_ids && a.layers == b.layers &&
           a.feature_len == b.feature_len && a.embeddings == b.embeddings;
  }
};

// Uniform integer in [0, bound) drawn by rejection, so the result does not
// depend on the standard library's distribution implementation.
uint64_t UniformBelow(std::mt19937_64& rng, uint64_t bound);

// Deterministic for a fixed store state and request.
SampledBatch SampleBatch(const GraphStore& store, const BatchRequest& request);

// Dense [n x n] row-major adjacency: A[i][j] = 1 iff edge j -> i.
std::vector<float> LayerToDense(const LayerGraph& layer, uint32_t n);

}  // namespace hgnn
