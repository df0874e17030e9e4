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


#include "hgnn/rpc/service.h"

#include <exception>
#include <string>

#include "hgnn/dfg/dfg.h"

namespace hgnn::rpc {

Service::Service(GraphStore& store, GraphRunner& runner, ServiceOptions options)
    : store_(store),
      runner_(runner),
      options_(options),
      baseline_(store.device().SnapshotCounters()) {}

std::vector<CommittedOp> Service::CommittedLog() const {
  std::lock_guard lock(log_mu_);
  return log_;
}

Frame Service::Handle(const Frame& request) {
  Frame response;
  response.opcode = request.opcode;
  response.request_id = request.request_id;
  try {
    if (request.version != kVersion) {
      Throw(Errc::kInvalidArgument, "unsupported protocol version " + std::to_string(request.version));
    }
    if (!IsKnownOpcode(request.opcode)) {
      Throw(Errc::kInvalidArgument, "unknown opcode " + std::to_string(request.opcode));
    }
    const auto op = static_cast<Opcode>(request.opcode);
    const Payload in = Payload::Decode(request.payload);
    if (IsMutating(op)) {
      std::unique_lock lock(mu_);
      response.payload = Dispatch(op, in).Encode();
      std::lock_guard log_lock(log_mu_);
      log_.push_back({op, request.payload});
    } else {
      std::shared_lock lock(mu_);
      response.payload = Dispatch(op, in).Encode();
    }
  } catch (const Error& e) {
    response.payload = ErrorPayload(e.code(), e.what());
  } catch (const std::exception& e) {
    response.payload = ErrorPayload(Errc::kInternal, e.what());
  }
  return response;
}

Payload Service::Dispatch(Opcode op, const Payload& in) {
  Payload out;
  auto sync = [this]() {
    if (options_.sync_after_mutation) store_.Sync();
  };
  switch (op) {
    case Opcode::kUpdateGraph: {
      IngestOptions opts;
      if (in.Has(Tag::kMinCapacity)) opts.min_capacity = in.U32(Tag::kMinCapacity);
      const IngestReport report = store_.UpdateGraph(in.Text(Tag::kEdgeText), in.Text(Tag::kEmbedText), opts);
      graph_prep_ns_ = report.prep_ns();
      ByteWriter ingest;
      ingest.Put<uint32_t>(report.vertex_count);
      ingest.Put<uint64_t>(report.edge_count);
      out.Add(Tag::kIngest, ingest.Take());
      ByteWriter timing;
      timing.Put<int64_t>(report.prep_start_ns);
      timing.Put<int64_t>(report.prep_end_ns);
      timing.Put<int64_t>(report.embed_write_start_ns);
      timing.Put<int64_t>(report.embed_write_end_ns);
      out.Add(Tag::kTiming, timing.Take());
      break;
    }
    case Opcode::kAddVertex: {
      const std::vector<float> embed = in.Floats(Tag::kEmbedding);
      if (embed.size() != store_.feature_len()) {
        Throw(Errc::kInvalidArgument, "embedding has " + std::to_string(embed.size()) + " floats, expected " +
                                          std::to_string(store_.feature_len()));
      }
      const Vid v = in.Has(Tag::kVid) ? in.U32(Tag::kVid) : store_.AllocVid();
      store_.AddVertex(v, embed);
      sync();
      out.AddU32(Tag::kVid, v);
      break;
    }
    case Opcode::kDeleteVertex:
      store_.DeleteVertex(in.U32(Tag::kVid));
      sync();
      break;
    case Opcode::kAddEdge:
      store_.AddEdge(in.U32(Tag::kDst), in.U32(Tag::kSrc));
      sync();
      break;
    case Opcode::kDeleteEdge:
      store_.DeleteEdge(in.U32(Tag::kDst), in.U32(Tag::kSrc));
      sync();
      break;
    case Opcode::kUpdateEmbed:
      store_.UpdateEmbed(in.U32(Tag::kVid), in.Floats(Tag::kEmbedding));
      sync();
      break;
    case Opcode::kGetEmbed:
      out.AddFloats(Tag::kEmbedding, store_.GetEmbed(in.U32(Tag::kVid)));
      break;
    case Opcode::kGetNeighbors:
      out.AddVids(Tag::kVids, store_.GetNeighbors(in.U32(Tag::kVid)));
      break;
    case Opcode::kRun: {
      const DataflowGraph dfg = DataflowGraph::Load(in.Text(Tag::kDfg));
      std::map<std::string, Value> inputs;
      for (const Record* r : in.All(Tag::kInput)) {
        auto [name, value] = DecodeNamedValue(r->data);
        if (!inputs.emplace(name, std::move(value)).second) {
          Throw(Errc::kInvalidArgument, "input \"" + name + "\" given twice");
        }
      }
      ExecutionResult result = runner_.Execute(dfg, inputs);
      result.breakdown.graph_prep_ns = graph_prep_ns_;
      for (const auto& [name, value] : result.outputs) out.Add(Tag::kOutput, EncodeNamedValue(name, value));
      out.Add(Tag::kBreakdown, EncodeBreakdown(result.breakdown));
      std::lock_guard log_lock(log_mu_);
      last_breakdown_ = result.breakdown;
      break;
    }
    case Opcode::kPlugin: {
      const std::string path = in.Text(Tag::kPath);
      constexpr std::string_view kStatic = "static:";
      if (path.rfind(kStatic, 0) == 0) {
        runner_.StaticPlugin(std::string_view(path).substr(kStatic.size()));
      } else {
        runner_.Plugin(path);
      }
      break;
    }
    case Opcode::kProgram:
      runner_.Program(in.Text(Tag::kBundle));
      break;
    case Opcode::kStats: {
      out.Add(Tag::kCounters, EncodeCounters(store_.device().SnapshotCounters() - baseline_));
      const StoreStats stats = store_.formatted() ? store_.stats() : StoreStats{};
      ByteWriter w;
      w.Put<uint64_t>(stats.update_requests);
      w.Put<uint64_t>(stats.evictions);
      w.Put<uint64_t>(stats.promotions);
      out.Add(Tag::kStoreStats, w.Take());
      Breakdown b;
      {
        std::lock_guard log_lock(log_mu_);
        b = last_breakdown_;
      }
      if (b == Breakdown{}) b.graph_prep_ns = graph_prep_ns_;
      out.Add(Tag::kBreakdown, EncodeBreakdown(b));
      break;
    }
  }
  return out;
}

}  // namespace hgnn::rpc
