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

// Graph-centric archival layer over a SimulatedSsd.
//
// LPN space:
//   [0, meta_pages)                  header page + metadata section slots
//   [neighbor_begin, emb_first_lpn)  neighbor space (H-type and L-type pages)
//   [emb_first_lpn, page_count)      embedding space; VID v's record starts at
//                                    byte v * 4F from emb_first_lpn
//
// High-degree vertices (sets that do not fit in one L-type page) are H-type:
// their neighbors span a chain of dedicated pages. Everything else is L-type
// and shares pages with other vertices. L-type pages cover disjoint, ordered
// VID ranges, so v is found through the l_table entry with the least
// max_vid >= v.
//
// Header page (LPN 0), little-endian:
//   magic "HGNNMAP\0", version u32, page_size u32, feature_len u32,
//   capacity u32, next_vid u32, reserved u32, meta_pages u64,
//   neighbor_begin u64, neighbor_watermark u64, emb_first_lpn u64,
//   update_requests u64, evictions u64, promotions u64,
//   section_count u32, then section_count x {first_lpn u64, page_budget u64,
//   byte_len u64}.

#pragma once

#include <cstdint>
#include <shared_mutex>
#include <span>
#include <string_view>
#include <vector>

#include "hgnn/blockdev/simulated_ssd.h"
#include "hgnn/graphstore/mapping.h"
#include "hgnn/graphstore/page_codec.h"

namespace hgnn {

// I/O tags used for per-operation accounting.
namespace io_tag {
inline constexpr std::string_view kBulkEmbed = "bulk_embed";
inline constexpr std::string_view kBulkGraph = "bulk_graph";
inline constexpr std::string_view kMetaSync = "meta_sync";
inline constexpr std::string_view kMetaLoad = "meta_load";
inline constexpr std::string_view kGetNeighbors = "get_neighbors";
inline constexpr std::string_view kGetEmbed = "get_embed";
inline constexpr std::string_view kAddVertex = "unit_add_vertex";
inline constexpr std::string_view kDeleteVertex = "unit_delete_vertex";
inline constexpr std::string_view kAddEdge = "unit_add_edge";
inline constexpr std::string_view kDeleteEdge = "unit_delete_edge";
inline constexpr std::string_view kUpdateEmbed = "unit_update_embed";
inline constexpr std::string_view kBatchGet = "batch_get";
}  // namespace io_tag

inline constexpr uint32_t kStoreFormatVersion = 1;

struct IngestOptions {
  // Embedding-region capacity is max(ceil(1.25 * vertices), min_capacity).
  uint32_t min_capacity = 0;
};

// Timestamps are nanoseconds since the start of the UpdateGraph call.
struct IngestReport {
  uint32_t vertex_count = 0;
  uint64_t edge_count = 0;  // unique undirected edges, self-loops excluded
  int64_t prep_start_ns = 0;
  int64_t prep_end_ns = 0;
  int64_t embed_write_start_ns = 0;
  int64_t embed_write_end_ns = 0;

  // Graph conversion ran entirely inside the embedding-write interval.
  bool PrepOverlapped() const {
    return embed_write_start_ns <= prep_start_ns && prep_end_ns <= embed_write_end_ns;
  }
  int64_t prep_ns() const { return prep_end_ns - prep_start_ns; }
};

struct StoreStats {
  uint64_t update_requests = 0;
  uint64_t evictions = 0;
  uint64_t promotions = 0;
};

enum class VertexType : uint8_t { kL = 0, kH = 1 };

struct VertexLocation {
  VertexType type = VertexType::kL;
  size_t l_index = 0;       // L-type: resolved l_table entry
  std::vector<Lpn> lpns;    // H-type: the chain; L-type: the single page
};

struct EmbeddingRegion {
  uint32_t feature_len = 0;
  uint64_t record_size = 0;
  uint32_t capacity = 0;
  Lpn first_lpn = 0;
};

class GraphStore {
 public:
  // Loads the mapping when the device carries one; otherwise the store is
  // unformatted until Format() or UpdateGraph().
  explicit GraphStore(SimulatedSsd& device);
  ~GraphStore();
  GraphStore(const GraphStore&) = delete;
  GraphStore& operator=(const GraphStore&) = delete;

  // Lays out an empty store for `capacity` vertices of `feature_len` floats.
  void Format(uint32_t feature_len, uint32_t capacity);
  bool formatted() const;

  // Bulk ingest. Replaces any previous content.
  IngestReport UpdateGraph(std::string_view edge_text, std::string_view embed_text,
                           const IngestOptions& options = {});

  std::vector<Vid> GetNeighbors(Vid v, std::string_view tag = io_tag::kGetNeighbors) const;
  std::vector<float> GetEmbed(Vid v, std::string_view tag = io_tag::kGetEmbed) const;

  void AddVertex(Vid v, std::span<const float> embed);
  void DeleteVertex(Vid v);
  Vid AllocVid();
  void AddEdge(Vid dst, Vid src);
  void DeleteEdge(Vid dst, Vid src);
  void UpdateEmbed(Vid v, std::span<const float> embed);

  // Persists the mapping tables; only changed metadata pages are written.
  void Sync();

  bool IsLive(Vid v) const;
  std::vector<Vid> LiveVertices() const;
  uint32_t feature_len() const;
  uint32_t capacity() const;
  Vid next_vid() const;
  StoreStats stats() const;
  EmbeddingRegion embedding_region() const;
  StoreLayout layout() const;
  GraphMapping MappingSnapshot() const;
  // Resolution path for v through gmap and the tables, without page I/O.
  VertexLocation Locate(Vid v) const;
  // Full structural check including page contents. Throws kInternal.
  void CheckInvariants() const;

  SimulatedSsd& device() const { return device_; }

 private:
  void RequireFormatted() const;
  void RequireLive(Vid v) const;
  void Load();
  void ResetInMemory(const StoreLayout& layout);

  std::vector<Vid> NeighborsLocked(Vid v, std::string_view tag) const;
  void ReadRecordLocked(Vid v, MutableByteSpan out, std::string_view tag) const;
  void WriteRecordLocked(Vid v, ByteSpan record, std::string_view tag);

  Lpn AllocPage();
  void FreePage(Lpn lpn, std::string_view tag);
  LtypePage ReadL(Lpn lpn, std::string_view tag) const;
  void WriteL(Lpn lpn, const LtypePage& page, std::string_view tag);
  HtypePage ReadH(Lpn lpn, std::string_view tag) const;
  void WriteH(Lpn lpn, const HtypePage& page, std::string_view tag);

  // Writes `page` back to l_table[idx] after evicting sets until it fits.
  void StoreLPage(size_t idx, LtypePage& page, std::string_view tag);
  // Removes v's set from its L-type page; drops the page when it empties.
  void RemoveLSet(Vid v, std::string_view tag);
  void AppendLSet(NeighborSet set, std::string_view tag);
  void WriteHChain(Vid v, const std::vector<Vid>& neighbors, std::string_view tag);

  bool AddDirected(Vid x, Vid nb, std::string_view tag);
  bool RemoveDirected(Vid x, Vid nb, std::string_view tag);

  SimulatedSsd& device_;
  mutable std::shared_mutex mu_;
  bool formatted_ = false;
  StoreLayout layout_;
  GraphMapping map_;
  std::vector<Lpn> free_pages_;
  Lpn neighbor_watermark_ = 0;
  StoreStats stats_;
  // Last known on-disk content of each metadata page; empty = unknown.
  std::vector<Bytes> meta_shadow_;
};

}  // namespace hgnn
