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


#include "hgnn/workload/stream_replay.h"

#include <chrono>
#include <random>

namespace hgnn {

namespace {

int64_t NowNs() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

ReplayReport ReplayStream(GraphStore& store, const UpdateStreamSpec& spec,
                          const std::function<void(const DayReport&)>& on_day) {
  spec.Validate();
  const std::vector<Vid> live = store.LiveVertices();
  std::vector<Edge> edges;
  for (Vid v : live) {
    for (Vid u : store.GetNeighbors(v, "stream_scan")) {
      if (v < u) edges.emplace_back(v, u);
    }
  }
  UpdateStreamGenerator gen(spec, live, edges);
  std::mt19937_64 embed_rng(spec.seed ^ 0x5eedf00dull);
  const uint32_t F = store.feature_len();

  ReplayReport report;
  const StoreStats start = store.stats();
  for (uint32_t d = 0; d < spec.days; ++d) {
    const std::vector<UpdateOp> ops = gen.NextDay([&store] { return store.AllocVid(); });
    const StoreStats before = store.stats();
    const int64_t t0 = NowNs();
    for (const UpdateOp& op : ops) {
      switch (op.kind) {
        case UpdateKind::kAddVertex:
          store.AddVertex(op.a, RandomEmbedding(F, embed_rng));
          break;
        case UpdateKind::kDeleteVertex:
          store.DeleteVertex(op.a);
          break;
        case UpdateKind::kAddEdge:
          store.AddEdge(op.a, op.b);
          break;
        case UpdateKind::kDeleteEdge:
          store.DeleteEdge(op.a, op.b);
          break;
      }
    }
    const StoreStats after = store.stats();
    DayReport day;
    day.day = d + 1;
    day.operations = ops.size();
    day.elapsed_ns = NowNs() - t0;
    day.update_requests = after.update_requests - before.update_requests;
    day.evictions = after.evictions - before.evictions;
    report.operations += day.operations;
    report.elapsed_ns += day.elapsed_ns;
    report.days.push_back(day);
    if (on_day) on_day(day);
  }
  const StoreStats end = store.stats();
  report.update_requests = end.update_requests - start.update_requests;
  report.evictions = end.evictions - start.evictions;
  report.promotions = end.promotions - start.promotions;
  return report;
}

}  // namespace hgnn
