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


// Synthetic graphs and mutable-graph update streams with power-law
// (preferential) attachment: a vertex is chosen with weight (deg + 1)^a.

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "hgnn/graphstore/text_formats.h"

namespace hgnn {

struct UpdateStreamSpec {
  uint32_t days = 100;
  uint32_t vertex_adds = 365;     // per day
  uint32_t edge_adds = 8800;      // per day, including new-vertex attachments
  uint32_t vertex_deletes = 16;   // per day
  uint32_t edge_deletes = 713;    // per day
  double attachment = 1.0;
  uint64_t seed = 1;

  void Validate() const;
};

enum class UpdateKind : uint8_t { kAddVertex, kDeleteVertex, kAddEdge, kDeleteEdge };

struct UpdateOp {
  UpdateKind kind = UpdateKind::kAddEdge;
  Vid a = 0;
  Vid b = 0;  // second endpoint for edge ops
  friend bool operator==(const UpdateOp&, const UpdateOp&) = default;
};

// Weighted sampling over VIDs; weights may change and the VID space grows.
class FenwickSampler {
 public:
  void Set(Vid v, double weight);
  double Get(Vid v) const { return v < weights_.size() ? weights_[v] : 0.0; }
  double Total() const { return total_; }
  // Requires Total() > 0; u is uniform in [0, 1).
  Vid Sample(double u) const;

 private:
  void Grow(size_t n);
  std::vector<double> weights_;
  std::vector<double> tree_;
  double total_ = 0.0;
};

class UpdateStreamGenerator {
 public:
  // `edges` are the undirected edges of the initial graph without self-loops.
  UpdateStreamGenerator(const UpdateStreamSpec& spec, const std::vector<Vid>& live,
                        const std::vector<Edge>& edges);

  // One day of operations in application order: vertex adds each followed by
  // one attachment edge, the remaining edge adds, edge deletes, then vertex
  // deletes. New VIDs come from `alloc_vid`, called once per vertex add.
  std::vector<UpdateOp> NextDay(const std::function<Vid()>& alloc_vid);

  uint32_t day() const { return day_; }
  size_t live_count() const { return live_.size(); }
  size_t edge_count() const { return edges_.size(); }

 private:
  double UnitDraw();
  double Weight(size_t degree) const;
  void AddVertex(Vid v);
  bool AddEdge(Vid a, Vid b);
  void RemoveEdgeAt(size_t index);
  void RemoveVertex(Vid v);
  void Reweigh(Vid v);

  UpdateStreamSpec spec_;
  std::mt19937_64 rng_;
  uint32_t day_ = 0;
  std::vector<Vid> live_;
  std::vector<size_t> live_pos_;   // by VID; SIZE_MAX when dead
  std::vector<std::vector<Vid>> adj_;
  std::vector<Edge> edges_;        // (min, max)
  std::unordered_map<uint64_t, size_t> edge_pos_;  // key -> index in edges_
  FenwickSampler attach_;
};

// Connected power-law graph: each new vertex attaches to a preferential
// target, then the remaining edges join a uniform vertex to a preferential one.
std::vector<Edge> GeneratePowerLawGraph(uint32_t vertices, uint64_t edges, double attachment,
                                        uint64_t seed);

std::string FormatEdgeText(const std::vector<Edge>& edges);
// Row i holds `feature_len` seeded values in [-1, 1) for VID i.
std::string FormatEmbeddingText(uint32_t rows, uint32_t feature_len, uint64_t seed);
std::vector<float> RandomEmbedding(uint32_t feature_len, std::mt19937_64& rng);

}  // namespace hgnn
