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
#include <functional>
#include <numeric>
#include <random>

#include "hgnn/graphstore/graph_store.h"
#include "hgnn/workload/update_stream.h"
#include "test_support.h"

namespace hgnn {
namespace {

using testing::AdjacencyOracle;
using testing::MakeDevice;
using testing::ScratchDir;

Errc CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::kInternal;
}

class GraphStoreTest : public ::testing::Test {
 protected:
  void Open(uint32_t page_size = 512, uint64_t pages = 256) {
    dev_ = MakeDevice(dir_, page_size, pages);
    store_ = std::make_unique<GraphStore>(*dev_);
  }
  void ExpectMatches(const AdjacencyOracle& oracle) {
    for (Vid v : oracle.Live()) {
      ASSERT_EQ(store_->GetNeighbors(v), oracle.Neighbors(v)) << "vid " << v;
    }
    EXPECT_EQ(store_->LiveVertices(), oracle.Live());
    store_->CheckInvariants();
  }

  ScratchDir dir_;
  std::unique_ptr<SimulatedSsd> dev_;
  std::unique_ptr<GraphStore> store_;
};

TEST_F(GraphStoreTest, FiveVertexExampleIsSortedUndirectedAndSelfLooped) {
  Open();
  const IngestReport r =
      store_->UpdateGraph(testing::kFiveVertexEdges, testing::FiveVertexEmbeddings());
  EXPECT_EQ(r.vertex_count, 5u);
  EXPECT_EQ(r.edge_count, 5u);
  const std::vector<std::vector<Vid>> expected = {
      {0, 1, 3}, {0, 1, 2}, {1, 2, 3}, {0, 2, 3, 4}, {3, 4}};
  for (Vid v = 0; v < 5; ++v) EXPECT_EQ(store_->GetNeighbors(v), expected[v]) << v;
  store_->CheckInvariants();
}

TEST_F(GraphStoreTest, SingleEdgeIsSymmetrized) {
  Open();
  store_->UpdateGraph("0 1\n", "1 2\n3 4\n");
  EXPECT_EQ(store_->GetNeighbors(0), (std::vector<Vid>{0, 1}));
  EXPECT_EQ(store_->GetNeighbors(1), (std::vector<Vid>{0, 1}));
  EXPECT_EQ(store_->GetEmbed(1), (std::vector<float>{3, 4}));
  EXPECT_EQ(store_->GetEmbed(0), (std::vector<float>{1, 2}));
}

TEST_F(GraphStoreTest, GapsBecomeIsolatedVerticesAndDuplicatesCollapse) {
  Open();
  const IngestReport r = store_->UpdateGraph("0 2\n2 0\n0 2\n2 2\n", "0\n1\n2\n3\n");
  EXPECT_EQ(r.edge_count, 1u);
  EXPECT_EQ(store_->GetNeighbors(1), (std::vector<Vid>{1}));
  EXPECT_EQ(store_->GetNeighbors(3), (std::vector<Vid>{3}));
  EXPECT_EQ(store_->GetNeighbors(2), (std::vector<Vid>{0, 2}));
}

TEST_F(GraphStoreTest, IngestErrors) {
  Open();
  EXPECT_EQ(CodeOf([&] { store_->UpdateGraph("0 5\n", "1\n2\n"); }), Errc::kParse);
  EXPECT_EQ(CodeOf([&] { store_->UpdateGraph("0 x\n", "1\n2\n"); }), Errc::kParse);
  EXPECT_EQ(CodeOf([&] { store_->UpdateGraph("0 1\n", "1 2\n3\n"); }), Errc::kParse);
  EXPECT_EQ(CodeOf([&] { store_->UpdateGraph("0 1\n", ""); }), Errc::kParse);
  Open(512, 16);
  EXPECT_EQ(CodeOf([&] {
              store_->UpdateGraph("0 1\n", testing::FiveVertexEmbeddings() +
                                               FormatEmbeddingText(4000, 2, 1));
            }),
            Errc::kCapacityExceeded);
}

TEST_F(GraphStoreTest, UnformattedStoreRefusesOperations) {
  Open();
  EXPECT_FALSE(store_->formatted());
  EXPECT_EQ(CodeOf([&] { store_->GetNeighbors(0); }), Errc::kFailedPrecondition);
  EXPECT_EQ(CodeOf([&] { store_->AllocVid(); }), Errc::kFailedPrecondition);
}

TEST_F(GraphStoreTest, EmbeddingRegionOccupiesTopOfLpnSpace) {
  Open(512, 256);
  store_->Format(3, 100);
  const EmbeddingRegion region = store_->embedding_region();
  EXPECT_EQ(region.record_size, 12u);
  EXPECT_EQ(region.capacity, 100u);
  const uint64_t region_pages = (100 * 12 + 511) / 512;
  EXPECT_EQ(region.first_lpn + region_pages, dev_->page_count());
}

TEST_F(GraphStoreTest, RecordsStraddlingPagesRoundTrip) {
  Open(512, 256);
  store_->Format(3, 400);  // 12-byte records cross 512-byte page boundaries
  std::mt19937_64 rng(5);
  std::map<Vid, std::vector<float>> expect;
  for (Vid v = 0; v < 100; ++v) {
    expect[v] = RandomEmbedding(3, rng);
    store_->AddVertex(v, expect[v]);
  }
  for (Vid v = 0; v < 100; v += 3) {
    expect[v] = RandomEmbedding(3, rng);
    store_->UpdateEmbed(v, expect[v]);
  }
  for (const auto& [v, e] : expect) EXPECT_EQ(store_->GetEmbed(v), e);
}

TEST_F(GraphStoreTest, UnitOperationErrors) {
  Open();
  store_->UpdateGraph("0 1\n", "1 2\n3 4\n");
  const std::vector<float> e{0, 0};
  EXPECT_EQ(CodeOf([&] { store_->AddVertex(1, e); }), Errc::kAlreadyExists);
  EXPECT_EQ(CodeOf([&] { store_->AddVertex(99, e); }), Errc::kCapacityExceeded);
  EXPECT_EQ(CodeOf([&] { store_->AddVertex(2, std::vector<float>{1}); }), Errc::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { store_->AddEdge(0, 2); }), Errc::kNotFound);
  EXPECT_EQ(CodeOf([&] { store_->DeleteEdge(0, 0); }), Errc::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { store_->GetEmbed(2); }), Errc::kNotFound);
  EXPECT_EQ(CodeOf([&] { store_->DeleteVertex(2); }), Errc::kNotFound);
  EXPECT_EQ(CodeOf([&] { store_->UpdateEmbed(0, std::vector<float>{1, 2, 3}); }),
            Errc::kInvalidArgument);
}

TEST_F(GraphStoreTest, SelfLoopAddIsCountedNoOp) {
  Open();
  store_->UpdateGraph("0 1\n", "1\n2\n");
  const uint64_t before = store_->stats().update_requests;
  store_->AddEdge(1, 1);
  EXPECT_EQ(store_->stats().update_requests, before + 1);
  EXPECT_EQ(store_->GetNeighbors(1), (std::vector<Vid>{0, 1}));
}

TEST_F(GraphStoreTest, DeletedVidIsReusedFirst) {
  Open();
  store_->UpdateGraph("0 1\n1 2\n", "1\n2\n3\n");
  store_->DeleteVertex(1);
  EXPECT_EQ(store_->GetNeighbors(0), (std::vector<Vid>{0}));
  EXPECT_EQ(store_->GetNeighbors(2), (std::vector<Vid>{2}));
  EXPECT_FALSE(store_->IsLive(1));
  EXPECT_EQ(store_->AllocVid(), 1u);
  EXPECT_EQ(store_->AllocVid(), 3u);
  store_->AddVertex(1, std::vector<float>{7});
  EXPECT_EQ(store_->GetNeighbors(1), (std::vector<Vid>{1}));
  EXPECT_EQ(store_->GetEmbed(1), (std::vector<float>{7}));
  store_->CheckInvariants();
}

TEST_F(GraphStoreTest, AddEdgeBetweenLtypeVerticesCostsTwoRmw) {
  Open();
  store_->UpdateGraph("0 1\n2 3\n", "1\n2\n3\n4\n");
  ASSERT_EQ(store_->Locate(0).type, VertexType::kL);
  ASSERT_EQ(store_->Locate(3).type, VertexType::kL);
  dev_->ResetCounters();
  store_->AddEdge(0, 3);
  const IoCounterSet c = dev_->SnapshotCounters().Tag(io_tag::kAddEdge);
  EXPECT_EQ(c.rmw_count, 2u);
  EXPECT_EQ(c.pages_read, 2u);
  EXPECT_EQ(c.pages_written, 2u);
  EXPECT_EQ(store_->stats().evictions, 0u);
}

TEST_F(GraphStoreTest, HighDegreeVertexIsPromotedToChain) {
  Open(512, 512);
  std::string edges;
  for (Vid v = 1; v < 300; ++v) edges += "0 " + std::to_string(v) + "\n";
  store_->UpdateGraph(edges, FormatEmbeddingText(300, 2, 9));
  const VertexLocation hub = store_->Locate(0);
  EXPECT_EQ(hub.type, VertexType::kH);
  EXPECT_EQ(hub.lpns.size(), 3u);  // 300 VIDs over 127-entry pages
  std::vector<Vid> all(300);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(store_->GetNeighbors(0), all);
  EXPECT_EQ(store_->Locate(5).type, VertexType::kL);

  // Growing an L-type vertex past one page promotes it.
  for (Vid v = 2; v < 140; ++v) store_->AddEdge(1, v);
  EXPECT_EQ(store_->Locate(1).type, VertexType::kH);
  EXPECT_GE(store_->stats().promotions, 1u);
  store_->CheckInvariants();
}

TEST_F(GraphStoreTest, FullPageEvictsIntoFreshPage) {
  Open(512, 256);
  // 40 isolated vertices share pages; growing one forces an eviction.
  store_->UpdateGraph("0 1\n", FormatEmbeddingText(40, 1, 2));
  const size_t pages_before = store_->MappingSnapshot().l_table.size();
  for (Vid v = 2; v < 40; ++v) store_->AddEdge(1, v);
  EXPECT_GT(store_->stats().evictions, 0u);
  EXPECT_GT(store_->MappingSnapshot().l_table.size(), pages_before);
  store_->CheckInvariants();
  for (Vid v = 2; v < 40; ++v) {
    EXPECT_EQ(store_->GetNeighbors(v), (std::vector<Vid>{1, v})) << v;
  }
}

TEST_F(GraphStoreTest, RandomUnitOperationsMatchOracle) {
  Open(512, 2048);
  std::mt19937_64 rng(77);
  const uint32_t n = 200;
  const auto edges = testing::RandomEdges(n, 600, rng);
  store_->UpdateGraph(FormatEdgeText(edges), FormatEmbeddingText(n, 2, 1));
  AdjacencyOracle oracle = AdjacencyOracle::FromEdges(n, edges);
  ExpectMatches(oracle);
  for (int step = 0; step < 1500; ++step) {
    const auto live = oracle.Live();
    const Vid a = live[rng() % live.size()];
    const Vid b = live[rng() % live.size()];
    switch (rng() % 8) {
      case 0: {
        const Vid v = store_->AllocVid();
        store_->AddVertex(v, std::vector<float>{1, 2});
        oracle.AddVertex(v);
        break;
      }
      case 1:
        if (oracle.size() > 10) {
          store_->DeleteVertex(a);
          oracle.DeleteVertex(a);
        }
        break;
      case 2:
      case 3:
        if (a != b) {
          store_->DeleteEdge(a, b);
          oracle.DeleteEdge(a, b);
        }
        break;
      default:
        store_->AddEdge(a, b);
        if (a != b) oracle.AddEdge(a, b);
        break;
    }
    if (step % 100 == 0) ExpectMatches(oracle);
  }
  ExpectMatches(oracle);
}

TEST_F(GraphStoreTest, ReopenRestoresMapping) {
  Open(512, 1024);
  std::mt19937_64 rng(8);
  const auto edges = testing::RandomEdges(150, 500, rng);
  store_->UpdateGraph(FormatEdgeText(edges), FormatEmbeddingText(150, 4, 3));
  AdjacencyOracle oracle = AdjacencyOracle::FromEdges(150, edges);
  for (int i = 0; i < 200; ++i) {
    const Vid a = rng() % 150, b = rng() % 150;
    store_->AddEdge(a, b);
    if (a != b) oracle.AddEdge(a, b);
  }
  store_->DeleteVertex(7);
  oracle.DeleteVertex(7);
  store_->Sync();
  const GraphMapping before = store_->MappingSnapshot();
  const StoreStats stats = store_->stats();
  const std::vector<float> emb = store_->GetEmbed(9);
  const std::string path = dev_->geometry().image_path.string();
  store_.reset();
  dev_.reset();

  dev_ = SimulatedSsd::Open(path);
  store_ = std::make_unique<GraphStore>(*dev_);
  ASSERT_TRUE(store_->formatted());
  EXPECT_EQ(store_->MappingSnapshot(), before);
  EXPECT_EQ(store_->stats().update_requests, stats.update_requests);
  EXPECT_EQ(store_->GetEmbed(9), emb);
  ExpectMatches(oracle);
}

TEST_F(GraphStoreTest, SyncWritesOnlyChangedMetadataPages) {
  Open(512, 1024);
  store_->UpdateGraph("0 1\n", FormatEmbeddingText(100, 2, 3));
  dev_->ResetCounters();
  store_->Sync();
  EXPECT_EQ(dev_->SnapshotCounters().Tag(io_tag::kMetaSync).pages_written, 0u);
  store_->AddEdge(0, 50);
  store_->Sync();
  const uint64_t written = dev_->SnapshotCounters().Tag(io_tag::kMetaSync).pages_written;
  EXPECT_GE(written, 1u);
  EXPECT_LT(written, store_->layout().meta_pages);
}

TEST_F(GraphStoreTest, LargeEmbeddingIngestOverlapsConversion) {
  Open(4096, 8192);
  std::mt19937_64 rng(4);
  const auto edges = testing::RandomEdges(1000, 3000, rng);
  const std::string edge_text = FormatEdgeText(edges);
  const std::string embed_text = FormatEmbeddingText(1000, 256, 6);
  ASSERT_GE(embed_text.size(), 100 * edge_text.size());
  const IngestReport r = store_->UpdateGraph(edge_text, embed_text);
  EXPECT_LE(r.embed_write_start_ns, r.prep_start_ns);
  EXPECT_LE(r.prep_start_ns, r.prep_end_ns);
  EXPECT_TRUE(r.PrepOverlapped());
}

}  // namespace
}  // namespace hgnn
