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


#include <gtest/gtest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <set>

#include "hgnn/batchprep/sampler.h"
#include "hgnn/workload/update_stream.h"
#include "test_support.h"

namespace hgnn {
namespace {

using testing::MakeDevice;
using testing::ScratchDir;

class SamplerTest : public ::testing::Test {
 protected:
  void Ingest(std::string_view edges, const std::string& embeds) {
    dev_ = MakeDevice(dir_, 512, 2048);
    store_ = std::make_unique<GraphStore>(*dev_);
    store_->UpdateGraph(edges, embeds);
  }

  // Structural invariants every batch must satisfy.
  void CheckBatch(const SampledBatch& b, const BatchRequest& req) {
    const size_t k = req.fanouts.size();
    ASSERT_EQ(b.layers.size(), k);
    for (uint32_t t = 0; t < req.targets.size(); ++t) {
      EXPECT_EQ(b.original_ids[t], req.targets[t]);
      EXPECT_EQ(b.new_ids.at(req.targets[t]), t);
    }
    EXPECT_EQ(b.num_targets(), req.targets.size());
    for (const auto& [orig, id] : b.new_ids) EXPECT_EQ(b.original_ids.at(id), orig);
    for (size_t l = 0; l < k; ++l) {
      const LayerGraph& layer = b.layers[l];
      layer.Validate();
      if (l > 0) {
        EXPECT_EQ(layer.num_src, b.layers[l - 1].num_dst);
      }
      for (uint32_t i = 0; i < layer.num_dst; ++i) {
        const Vid v = b.original_ids[i];
        const auto nbrs = store_->GetNeighbors(v);
        ASSERT_LT(layer.row_ptr[i], layer.row_ptr[i + 1]);
        EXPECT_EQ(layer.col_idx[layer.row_ptr[i]], i) << "self first";
        std::set<uint32_t> seen;
        for (uint32_t e = layer.row_ptr[i]; e < layer.row_ptr[i + 1]; ++e) {
          EXPECT_TRUE(seen.insert(layer.col_idx[e]).second) << "duplicate neighbor";
          const Vid u = b.original_ids[layer.col_idx[e]];
          EXPECT_TRUE(std::binary_search(nbrs.begin(), nbrs.end(), u));
        }
        const size_t fanout = req.fanouts[k - 1 - l];
        const size_t want = req.count_self_in_fanout ? fanout - 1 : fanout;
        EXPECT_EQ(seen.size(), 1 + std::min(want, nbrs.size() - 1));
      }
      for (uint32_t j = 0; j < layer.num_src; ++j) {
        EXPECT_EQ(layer.deg[j], store_->GetNeighbors(b.original_ids[j]).size());
      }
    }
    EXPECT_EQ(b.layers.front().num_src, b.num_sampled());
    ASSERT_EQ(b.embeddings.size(), size_t{b.num_sampled()} * b.feature_len);
    for (uint32_t id = 0; id < b.num_sampled(); ++id) {
      const std::vector<float> e = store_->GetEmbed(b.original_ids[id]);
      EXPECT_TRUE(std::equal(e.begin(), e.end(), b.embeddings.begin() + size_t{id} * b.feature_len));
    }
  }

  ScratchDir dir_;
  std::unique_ptr<SimulatedSsd> dev_;
  std::unique_ptr<GraphStore> store_;
};

TEST_F(SamplerTest, FiveVertexWalkReindexesInSamplingOrder) {
  Ingest(testing::kFiveVertexEdges, testing::FiveVertexEmbeddings());
  BatchRequest req{{4}, {2, 2}, 0, true};
  // Find a seed whose second hop draws V_0 for V_3.
  std::optional<SampledBatch> found;
  for (uint64_t seed = 0; seed < 64 && !found; ++seed) {
    req.seed = seed;
    SampledBatch b = SampleBatch(*store_, req);
    if (b.original_ids == std::vector<Vid>{4, 3, 0}) found = std::move(b);
  }
  ASSERT_TRUE(found.has_value());
  const SampledBatch& b = *found;
  EXPECT_EQ(b.new_ids, (std::map<Vid, uint32_t>{{4, 0}, {3, 1}, {0, 2}}));
  // 1-hop layer (nearest the targets): 0* <- {0*, 1*}.
  EXPECT_EQ(b.layers[1].num_dst, 1u);
  EXPECT_EQ(b.layers[1].col_idx, (std::vector<uint32_t>{0, 1}));
  // 2-hop layer: 0* <- {0*, 1*}, 1* <- {1*, 2*}.
  EXPECT_EQ(b.layers[0].num_dst, 2u);
  EXPECT_EQ(b.layers[0].row_ptr, (std::vector<uint32_t>{0, 2, 4}));
  EXPECT_EQ(b.layers[0].col_idx, (std::vector<uint32_t>{0, 1, 1, 2}));
  EXPECT_EQ(b.layers[0].deg, (std::vector<uint32_t>{2, 4, 3}));
  EXPECT_EQ(b.embeddings, (std::vector<float>{4.0f, 4.5f, 3.0f, 3.5f, 0.0f, 0.5f}));
  CheckBatch(b, req);
}

TEST_F(SamplerTest, LargeFanoutTakesWholeNeighborhood) {
  Ingest(testing::kFiveVertexEdges, testing::FiveVertexEmbeddings());
  const BatchRequest req{{3, 1}, {10, 10}, 5, false};
  const SampledBatch b = SampleBatch(*store_, req);
  CheckBatch(b, req);
  for (const LayerGraph& layer : b.layers) {
    for (uint32_t i = 0; i < layer.num_dst; ++i) {
      std::vector<Vid> got;
      for (uint32_t e = layer.row_ptr[i]; e < layer.row_ptr[i + 1]; ++e) {
        got.push_back(b.original_ids[layer.col_idx[e]]);
      }
      std::sort(got.begin(), got.end());
      EXPECT_EQ(got, store_->GetNeighbors(b.original_ids[i]));
    }
  }
}

TEST_F(SamplerTest, RandomGraphBatchesAreDeterministicAndWellFormed) {
  const auto edges = GeneratePowerLawGraph(300, 1500, 1.0, 3);
  Ingest(FormatEdgeText(edges), FormatEmbeddingText(300, 4, 2));
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    BatchRequest req;
    std::set<Vid> targets;
    while (targets.size() < 1 + rng() % 8) targets.insert(static_cast<Vid>(rng() % 300));
    req.targets.assign(targets.begin(), targets.end());
    std::shuffle(req.targets.begin(), req.targets.end(), rng);
    req.fanouts = {1 + static_cast<uint32_t>(rng() % 5), 1 + static_cast<uint32_t>(rng() % 5)};
    req.seed = rng();
    req.count_self_in_fanout = trial % 2 == 0 && req.fanouts[0] > 1 && req.fanouts[1] > 1;
    const SampledBatch first = SampleBatch(*store_, req);
    CheckBatch(first, req);
    EXPECT_GT(first.io_pages, 0u);
    for (int rep = 0; rep < 100; ++rep) ASSERT_EQ(SampleBatch(*store_, req), first);
  }
}

TEST_F(SamplerTest, RequestErrors) {
  Ingest(testing::kFiveVertexEdges, testing::FiveVertexEmbeddings());
  auto code = [&](BatchRequest r) {
    try {
      SampleBatch(*store_, r);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::kInternal;
  };
  EXPECT_EQ(code({{9}, {2}, 0, false}), Errc::kNotFound);
  EXPECT_EQ(code({{1}, {0}, 0, false}), Errc::kInvalidArgument);
  EXPECT_EQ(code({{1}, {}, 0, false}), Errc::kInvalidArgument);
  EXPECT_EQ(code({{}, {2}, 0, false}), Errc::kInvalidArgument);
  EXPECT_EQ(code({{1, 1}, {2}, 0, false}), Errc::kInvalidArgument);
}

TEST(LayerToDense, EmptyLayerIsZero) {
  LayerGraph l;
  l.row_ptr = {0};
  EXPECT_EQ(LayerToDense(l, 3), std::vector<float>(9, 0.0f));
}

TEST(LayerToDense, SingleSelfLoop) {
  LayerGraph l{1, 1, {0, 1}, {0}, {1}};
  EXPECT_EQ(LayerToDense(l, 2), (std::vector<float>{1, 0, 0, 0}));
}

TEST(LayerToDense, MatchesEdgeEnumeration) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    LayerGraph l;
    l.num_src = 1 + rng() % 20;
    l.num_dst = 1 + rng() % l.num_src;
    l.row_ptr = {0};
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    for (uint32_t i = 0; i < l.num_dst; ++i) {
      std::set<uint32_t> cols;
      const size_t n = rng() % std::min<size_t>(5, l.num_src + 1);
      while (cols.size() < n) cols.insert(rng() % l.num_src);
      for (uint32_t c : cols) {
        l.col_idx.push_back(c);
        edges.emplace_back(i, c);
      }
      l.row_ptr.push_back(static_cast<uint32_t>(l.col_idx.size()));
    }
    l.deg.assign(l.num_src, 1);
    const uint32_t n = l.num_src + static_cast<uint32_t>(rng() % 3);
    std::vector<float> expect(size_t{n} * n, 0.0f);
    for (const auto& [i, j] : edges) expect[size_t{i} * n + j] = 1.0f;
    EXPECT_EQ(LayerToDense(l, n), expect);
  }
}

TEST(LayerToDense, RejectsUndersizedMatrix) {
  LayerGraph l{1, 2, {0, 2}, {0, 1}, {1, 1}};
  try {
    LayerToDense(l, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kOutOfRange);
  }
}

TEST(UniformBelow, StaysInRangeAndCoversIt) {
  std::mt19937_64 rng(9);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const uint64_t x = UniformBelow(rng, 7);
    ASSERT_LT(x, 7u);
    ++hits[x];
  }
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
  EXPECT_EQ(UniformBelow(rng, 1), 0u);
  EXPECT_THROW(UniformBelow(rng, 0), Error);
}

}  // namespace
}  // namespace hgnn
