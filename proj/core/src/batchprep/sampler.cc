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


#include "hgnn/batchprep/sampler.h"

#include <algorithm>
#include <string>
#include <utility>

namespace hgnn {

void LayerGraph::Validate() const {
  if (num_dst > num_src) Throw(Errc::kInvalidArgument, "layer has more destinations than sources");
  if (row_ptr.size() != size_t{num_dst} + 1 || row_ptr.front() != 0 ||
      row_ptr.back() != col_idx.size()) {
    Throw(Errc::kInvalidArgument, "layer row_ptr inconsistent with col_idx");
  }
  if (!std::is_sorted(row_ptr.begin(), row_ptr.end())) {
    Throw(Errc::kInvalidArgument, "layer row_ptr not monotone");
  }
  for (uint32_t c : col_idx) {
    if (c >= num_src) Throw(Errc::kInvalidArgument, "layer column " + std::to_string(c) + " out of range");
  }
  if (deg.size() != num_src) Throw(Errc::kInvalidArgument, "layer degree vector has wrong length");
  for (uint32_t d : deg) {
    if (d == 0) Throw(Errc::kInvalidArgument, "layer degree must be >= 1");
  }
}

uint64_t UniformBelow(std::mt19937_64& rng, uint64_t bound) {
  if (bound == 0) Throw(Errc::kInvalidArgument, "UniformBelow bound must be positive");
  // Reject the top partial bucket so every residue is equally likely.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return x % bound;
}

SampledBatch SampleBatch(const GraphStore& store, const BatchRequest& request) {
  if (request.targets.empty()) Throw(Errc::kInvalidArgument, "batch has no targets");
  if (request.fanouts.empty()) Throw(Errc::kInvalidArgument, "batch needs at least one hop");
  for (uint32_t s : request.fanouts) {
    if (s == 0) Throw(Errc::kInvalidArgument, "fanout must be >= 1");
  }
  const uint64_t reads_before =
      store.device().SnapshotCounters().Tag(io_tag::kBatchGet).pages_read;

  SampledBatch batch;
  std::vector<std::vector<Vid>> neighbors;  // by new id
  auto admit = [&](Vid v) -> uint32_t {
    auto [it, inserted] = batch.new_ids.emplace(v, batch.num_sampled());
    if (inserted) {
      batch.original_ids.push_back(v);
      neighbors.push_back(store.GetNeighbors(v, io_tag::kBatchGet));
    }
    return it->second;
  };
  for (Vid t : request.targets) {
    if (!store.IsLive(t)) Throw(Errc::kNotFound, "target vertex " + std::to_string(t) + " is not live");
    if (batch.new_ids.count(t)) Throw(Errc::kInvalidArgument, "duplicate target " + std::to_string(t));
    admit(t);
  }

  std::mt19937_64 rng(request.seed);
  const size_t k = request.fanouts.size();
  batch.layers.resize(k);
  uint32_t frontier = batch.num_sampled();
  std::vector<Vid> pool;
  for (size_t hop = 0; hop < k; ++hop) {
    const uint32_t fanout = request.fanouts[hop];
    LayerGraph& layer = batch.layers[k - 1 - hop];
    layer.num_dst = frontier;
    layer.row_ptr.assign(1, 0);
    for (uint32_t i = 0; i < frontier; ++i) {
      const Vid v = batch.original_ids[i];
      pool.clear();
      for (Vid u : neighbors[i]) {
        if (u != v) pool.push_back(u);
      }
      const size_t want = request.count_self_in_fanout ? fanout - 1 : fanout;
      const size_t take = std::min(want, pool.size());
      std::vector<uint32_t> row;
      row.push_back(i);  // self first
      for (size_t j = 0; j < take; ++j) {
        const size_t pick = j + UniformBelow(rng, pool.size() - j);
        std::swap(pool[j], pool[pick]);
        row.push_back(admit(pool[j]));
      }
      layer.col_idx.insert(layer.col_idx.end(), row.begin(), row.end());
      layer.row_ptr.push_back(static_cast<uint32_t>(layer.col_idx.size()));
    }
    frontier = batch.num_sampled();
    layer.num_src = frontier;
  }
  for (LayerGraph& layer : batch.layers) {
    layer.deg.resize(layer.num_src);
    for (uint32_t j = 0; j < layer.num_src; ++j) {
      layer.deg[j] = static_cast<uint32_t>(neighbors[j].size());
    }
  }

  batch.feature_len = store.feature_len();
  batch.embeddings.reserve(size_t{batch.num_sampled()} * batch.feature_len);
  for (Vid v : batch.original_ids) {
    std::vector<float> row = store.GetEmbed(v, io_tag::kBatchGet);
    batch.embeddings.insert(batch.embeddings.end(), row.begin(), row.end());
  }
  batch.io_pages =
      store.device().SnapshotCounters().Tag(io_tag::kBatchGet).pages_read - reads_before;
  return batch;
}

std::vector<float> LayerToDense(const LayerGraph& layer, uint32_t n) {
  if (n < layer.num_src) {
    Throw(Errc::kOutOfRange, "dense size " + std::to_string(n) + " below layer source count " +
                                 std::to_string(layer.num_src));
  }
  std::vector<float> dense(size_t{n} * n, 0.0f);
  for (uint32_t i = 0; i < layer.num_dst; ++i) {
    for (uint32_t e = layer.row_ptr[i]; e < layer.row_ptr[i + 1]; ++e) {
      dense[size_t{i} * n + layer.col_idx[e]] = 1.0f;
    }
  }
  return dense;
}

}  // namespace hgnn
