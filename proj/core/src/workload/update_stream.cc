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


#include "hgnn/workload/update_stream.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "hgnn/batchprep/sampler.h"
#include "hgnn/common/error.h"

namespace hgnn {

namespace {

constexpr size_t kDead = std::numeric_limits<size_t>::max();
constexpr int kPickAttempts = 64;

uint64_t EdgeKey(Vid a, Vid b) {
  if (a > b) std::swap(a, b);
  return uint64_t{a} << 32 | b;
}

double Unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void UpdateStreamSpec::Validate() const {
  if (!std::isfinite(attachment) || attachment < 0.0) {
    Throw(Errc::kInvalidArgument, "attachment exponent must be finite and non-negative");
  }
  if (edge_adds < vertex_adds) {
    Throw(Errc::kInvalidArgument, "edge adds must cover one attachment edge per new vertex");
  }
}

// ---------------------------------------------------------------------------
// FenwickSampler

void FenwickSampler::Grow(size_t n) {
  if (n <= weights_.size()) return;
  size_t cap = std::max<size_t>(weights_.size() * 2, 64);
  while (cap < n) cap *= 2;
  weights_.resize(cap, 0.0);
  tree_.assign(cap + 1, 0.0);
  for (size_t i = 0; i < cap; ++i) {
    tree_[i + 1] += weights_[i];
    const size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
    if (parent <= cap) tree_[parent] += tree_[i + 1];
  }
}

void FenwickSampler::Set(Vid v, double weight) {
  Grow(size_t{v} + 1);
  const double delta = weight - weights_[v];
  weights_[v] = weight;
  total_ += delta;
  for (size_t i = size_t{v} + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
}

Vid FenwickSampler::Sample(double u) const {
  if (!(total_ > 0.0)) Throw(Errc::kFailedPrecondition, "no weighted vertex to sample");
  double target = u * total_;
  size_t pos = 0;
  size_t step = 1;
  while (step * 2 < tree_.size()) step *= 2;
  for (; step > 0; step /= 2) {
    if (pos + step < tree_.size() && tree_[pos + step] <= target) {
      pos += step;
      target -= tree_[pos];
    }
  }
  // Rounding can land on a zero-weight slot; walk to the nearest live one.
  size_t v = std::min(pos, weights_.size() - 1);
  while (v > 0 && weights_[v] <= 0.0) --v;
  while (v + 1 < weights_.size() && weights_[v] <= 0.0) ++v;
  return static_cast<Vid>(v);
}

// ---------------------------------------------------------------------------
// UpdateStreamGenerator

UpdateStreamGenerator::UpdateStreamGenerator(const UpdateStreamSpec& spec,
                                             const std::vector<Vid>& live,
                                             const std::vector<Edge>& edges)
    : spec_(spec), rng_(spec.seed) {
  spec_.Validate();
  for (Vid v : live) AddVertex(v);
  for (const auto& [a, b] : edges) {
    if (a >= live_pos_.size() || b >= live_pos_.size() || live_pos_[a] == kDead ||
        live_pos_[b] == kDead) {
      Throw(Errc::kInvalidArgument, "initial edge references a dead vertex");
    }
    AddEdge(a, b);
  }
}

double UpdateStreamGenerator::UnitDraw() { return Unit(rng_); }

double UpdateStreamGenerator::Weight(size_t degree) const {
  return std::pow(static_cast<double>(degree) + 1.0, spec_.attachment);
}

void UpdateStreamGenerator::Reweigh(Vid v) { attach_.Set(v, Weight(adj_[v].size())); }

void UpdateStreamGenerator::AddVertex(Vid v) {
  if (v >= live_pos_.size()) {
    live_pos_.resize(size_t{v} + 1, kDead);
    adj_.resize(size_t{v} + 1);
  }
  if (live_pos_[v] != kDead) Throw(Errc::kInvalidArgument, "vertex added twice");
  live_pos_[v] = live_.size();
  live_.push_back(v);
  adj_[v].clear();
  Reweigh(v);
}

bool UpdateStreamGenerator::AddEdge(Vid a, Vid b) {
  if (a == b || !edge_pos_.emplace(EdgeKey(a, b), edges_.size()).second) return false;
  edges_.emplace_back(std::min(a, b), std::max(a, b));
  adj_[a].push_back(b);
  adj_[b].push_back(a);
  Reweigh(a);
  Reweigh(b);
  return true;
}

void UpdateStreamGenerator::RemoveEdgeAt(size_t index) {
  const auto [a, b] = edges_[index];
  edge_pos_.erase(EdgeKey(a, b));
  edges_[index] = edges_.back();
  edges_.pop_back();
  if (index < edges_.size()) edge_pos_[EdgeKey(edges_[index].first, edges_[index].second)] = index;
  for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
    auto& list = adj_[x];
    auto it = std::find(list.begin(), list.end(), y);
    *it = list.back();
    list.pop_back();
    Reweigh(x);
  }
}

void UpdateStreamGenerator::RemoveVertex(Vid v) {
  while (!adj_[v].empty()) RemoveEdgeAt(edge_pos_.at(EdgeKey(v, adj_[v].back())));
  const size_t pos = live_pos_[v];
  live_[pos] = live_.back();
  live_pos_[live_[pos]] = pos;
  live_.pop_back();
  live_pos_[v] = kDead;
  attach_.Set(v, 0.0);
}

std::vector<UpdateOp> UpdateStreamGenerator::NextDay(const std::function<Vid()>& alloc_vid) {
  std::vector<UpdateOp> ops;
  ops.reserve(size_t{spec_.vertex_adds} * 2 + spec_.edge_adds + spec_.edge_deletes + spec_.vertex_deletes);
  uint32_t edges_added = 0;
  for (uint32_t i = 0; i < spec_.vertex_adds; ++i) {
    const bool has_target = attach_.Total() > 0.0;
    const Vid target = has_target ? attach_.Sample(UnitDraw()) : 0;
    const Vid v = alloc_vid();
    AddVertex(v);
    ops.push_back({UpdateKind::kAddVertex, v, 0});
    if (has_target && AddEdge(v, target)) {
      ops.push_back({UpdateKind::kAddEdge, v, target});
      ++edges_added;
    }
  }
  for (; edges_added < spec_.edge_adds && live_.size() >= 2; ++edges_added) {
    for (int attempt = 0; attempt < kPickAttempts; ++attempt) {
      const Vid a = live_[UniformBelow(rng_, live_.size())];
      const Vid b = attach_.Sample(UnitDraw());
      if (AddEdge(a, b)) {
        ops.push_back({UpdateKind::kAddEdge, a, b});
        break;
      }
    }
  }
  for (uint32_t i = 0; i < spec_.edge_deletes && !edges_.empty(); ++i) {
    const size_t index = UniformBelow(rng_, edges_.size());
    const Edge e = edges_[index];
    RemoveEdgeAt(index);
    ops.push_back({UpdateKind::kDeleteEdge, e.first, e.second});
  }
  for (uint32_t i = 0; i < spec_.vertex_deletes && live_.size() > 1; ++i) {
    const Vid v = live_[UniformBelow(rng_, live_.size())];
    RemoveVertex(v);
    ops.push_back({UpdateKind::kDeleteVertex, v, 0});
  }
  ++day_;
  return ops;
}

// ---------------------------------------------------------------------------
// Synthetic datasets

std::vector<Edge> GeneratePowerLawGraph(uint32_t vertices, uint64_t edges, double attachment,
                                        uint64_t seed) {
  if (vertices < 2) Throw(Errc::kInvalidArgument, "need at least two vertices");
  const uint64_t max_edges = uint64_t{vertices} * (vertices - 1) / 2;
  if (edges < vertices - 1 || edges > max_edges) {
    Throw(Errc::kInvalidArgument, "edge count must lie in [vertices-1, vertices*(vertices-1)/2]");
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<Edge> out;
  out.reserve(edges);
  std::unordered_set<uint64_t> seen;
  FenwickSampler weights;
  std::vector<uint32_t> degree(vertices, 0);
  auto weigh = [&](Vid v) { weights.Set(v, std::pow(degree[v] + 1.0, attachment)); };
  auto add = [&](Vid a, Vid b) {
    if (a == b || !seen.insert(EdgeKey(a, b)).second) return false;
    out.emplace_back(std::min(a, b), std::max(a, b));
    ++degree[a];
    ++degree[b];
    weigh(a);
    weigh(b);
    return true;
  };
  weigh(0);
  for (Vid v = 1; v < vertices; ++v) {
    const Vid target = weights.Sample(Unit(rng));
    weigh(v);
    add(v, target);
  }
  while (out.size() < edges) {
    const Vid a = static_cast<Vid>(UniformBelow(rng, vertices));
    add(a, weights.Sample(Unit(rng)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string FormatEdgeText(const std::vector<Edge>& edges) {
  std::string out;
  out.reserve(edges.size() * 14);
  for (const auto& [a, b] : edges) {
    out += std::to_string(a);
    out += ' ';
    out += std::to_string(b);
    out += '\n';
  }
  return out;
}

std::vector<float> RandomEmbedding(uint32_t feature_len, std::mt19937_64& rng) {
  std::vector<float> row(feature_len);
  for (float& v : row) v = static_cast<float>(2.0 * Unit(rng) - 1.0);
  return row;
}

std::string FormatEmbeddingText(uint32_t rows, uint32_t feature_len, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::string out;
  out.reserve(size_t{rows} * feature_len * 10);
  char buf[32];
  for (uint32_t r = 0; r < rows; ++r) {
    const std::vector<float> row = RandomEmbedding(feature_len, rng);
    for (uint32_t f = 0; f < feature_len; ++f) {
      if (f) out += ' ';
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), row[f]);
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

}  // namespace hgnn
