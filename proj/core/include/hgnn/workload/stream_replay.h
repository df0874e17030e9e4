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


// Replays an update stream against a GraphStore through its unit operations.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hgnn/graphstore/graph_store.h"
#include "hgnn/workload/update_stream.h"

namespace hgnn {

struct DayReport {
  uint32_t day = 0;  // 1-based
  uint64_t operations = 0;
  int64_t elapsed_ns = 0;
  uint64_t update_requests = 0;  // store-counted, this day only
  uint64_t evictions = 0;        // this day only

  double mean_op_ns() const {
    return operations == 0 ? 0.0 : static_cast<double>(elapsed_ns) / static_cast<double>(operations);
  }
};

struct ReplayReport {
  std::vector<DayReport> days;
  uint64_t operations = 0;
  uint64_t update_requests = 0;
  uint64_t evictions = 0;
  uint64_t promotions = 0;
  int64_t elapsed_ns = 0;

  double eviction_fraction() const {
    return update_requests == 0 ? 0.0
                                : static_cast<double>(evictions) / static_cast<double>(update_requests);
  }
};

// The stream starts from the store's current live vertices and edges. New
// vertices get seeded random embeddings. `on_day` runs after each day.
ReplayReport ReplayStream(GraphStore& store, const UpdateStreamSpec& spec,
                          const std::function<void(const DayReport&)>& on_day = {});

}  // namespace hgnn
