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


// Request handling shared by every transport.
//
// Per-opcode payloads (request -> response):
//   UPDATE_GRAPH   kEdgeText, kEmbedText, [kMinCapacity] -> kIngest, kTiming
//   ADD_VERTEX     [kVid], kEmbedding                    -> kVid
//   DELETE_VERTEX  kVid                                  -> (empty)
//   ADD_EDGE       kDst, kSrc                            -> (empty)
//   DELETE_EDGE    kDst, kSrc                            -> (empty)
//   UPDATE_EMBED   kVid, kEmbedding                      -> (empty)
//   GET_EMBED      kVid                                  -> kEmbedding
//   GET_NEIGHBORS  kVid                                  -> kVids
//   RUN            kDfg, kInput...                       -> kOutput..., kBreakdown
//   PLUGIN         kPath ("static:<name>" for built-ins)  -> (empty)
//   PROGRAM        kBundle                               -> (empty)
//   STATS          (empty)                               -> kCounters, kStoreStats, kBreakdown
//
// STATS counters cover device I/O since the service was constructed.

#pragma once

#include <mutex>
#include <shared_mutex>
#include <vector>

#include "hgnn/graphstore/graph_store.h"
#include "hgnn/rpc/protocol.h"
#include "hgnn/runner/runner.h"

namespace hgnn::rpc {

struct CommittedOp {
  Opcode opcode = Opcode::kStats;
  Bytes payload;
};

struct ServiceOptions {
  // Persist the mapping tables after every successful store mutation.
  bool sync_after_mutation = true;
};

class Service {
 public:
  Service(GraphStore& store, GraphRunner& runner, ServiceOptions options = {});

  // Never throws; failures become error replies.
  Frame Handle(const Frame& request);

  // Successful mutating requests in the order they took effect.
  std::vector<CommittedOp> CommittedLog() const;

  GraphStore& store() { return store_; }
  GraphRunner& runner() { return runner_; }

 private:
  Payload Dispatch(Opcode op, const Payload& request);

  GraphStore& store_;
  GraphRunner& runner_;
  ServiceOptions options_;
  std::shared_mutex mu_;  // writers: mutating opcodes
  mutable std::mutex log_mu_;
  std::vector<CommittedOp> log_;
  IoCounters baseline_;
  int64_t graph_prep_ns_ = 0;
  Breakdown last_breakdown_;
};

}  // namespace hgnn::rpc
