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


#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hgnn/dfg/dfg.h"
#include "hgnn/rpc/transport.h"

namespace hgnn::rpc {

struct RemoteIngest {
  uint32_t vertex_count = 0;
  uint64_t edge_count = 0;
  IngestReport report;
};

struct RemoteRun {
  std::map<std::string, Value> outputs;
  Breakdown breakdown;
};

struct RemoteStats {
  IoCounters counters;
  StoreStats store;
  Breakdown breakdown;
};

// Typed wrapper over the service opcodes. Server errors surface as Error with
// the server's code.
class ServiceClient {
 public:
  explicit ServiceClient(Transport& transport) : transport_(transport) {}

  RemoteIngest UpdateGraph(std::string_view edge_text, std::string_view embed_text,
                           uint32_t min_capacity = 0);
  // Without `vid` the server allocates one.
  Vid AddVertex(std::span<const float> embed);
  Vid AddVertex(Vid vid, std::span<const float> embed);
  void DeleteVertex(Vid v);
  void AddEdge(Vid dst, Vid src);
  void DeleteEdge(Vid dst, Vid src);
  void UpdateEmbed(Vid v, std::span<const float> embed);
  std::vector<float> GetEmbed(Vid v);
  std::vector<Vid> GetNeighbors(Vid v);
  RemoteRun Run(const DataflowGraph& dfg, const std::map<std::string, Value>& inputs);
  void Plugin(std::string_view path);
  void Program(std::string_view bundle_text);
  RemoteStats Stats();

 private:
  Transport& transport_;
};

}  // namespace hgnn::rpc
