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


#include "hgnn/rpc/client.h"

namespace hgnn::rpc {

RemoteIngest ServiceClient::UpdateGraph(std::string_view edge_text, std::string_view embed_text,
                                        uint32_t min_capacity) {
  Payload req;
  req.AddText(Tag::kEdgeText, edge_text).AddText(Tag::kEmbedText, embed_text);
  if (min_capacity > 0) req.AddU32(Tag::kMinCapacity, min_capacity);
  const Payload rep = transport_.Call(Opcode::kUpdateGraph, req);
  RemoteIngest out;
  ByteReader ingest(rep.Require(Tag::kIngest).data);
  out.vertex_count = ingest.Get<uint32_t>();
  out.edge_count = ingest.Get<uint64_t>();
  out.report.vertex_count = out.vertex_count;
  out.report.edge_count = out.edge_count;
  if (const Record* t = rep.Find(Tag::kTiming)) {
    ByteReader r(t->data);
    out.report.prep_start_ns = r.Get<int64_t>();
    out.report.prep_end_ns = r.Get<int64_t>();
    out.report.embed_write_start_ns = r.Get<int64_t>();
    out.report.embed_write_end_ns = r.Get<int64_t>();
  }
  return out;
}

Vid ServiceClient::AddVertex(std::span<const float> embed) {
  Payload req;
  req.AddFloats(Tag::kEmbedding, embed);
  return transport_.Call(Opcode::kAddVertex, req).U32(Tag::kVid);
}

Vid ServiceClient::AddVertex(Vid vid, std::span<const float> embed) {
  Payload req;
  req.AddU32(Tag::kVid, vid).AddFloats(Tag::kEmbedding, embed);
  return transport_.Call(Opcode::kAddVertex, req).U32(Tag::kVid);
}

void ServiceClient::DeleteVertex(Vid v) {
  Payload req;
  req.AddU32(Tag::kVid, v);
  transport_.Call(Opcode::kDeleteVertex, req);
}

void ServiceClient::AddEdge(Vid dst, Vid src) {
  Payload req;
  req.AddU32(Tag::kDst, dst).AddU32(Tag::kSrc, src);
  transport_.Call(Opcode::kAddEdge, req);
}

void ServiceClient::DeleteEdge(Vid dst, Vid src) {
  Payload req;
  req.AddU32(Tag::kDst, dst).AddU32(Tag::kSrc, src);
  transport_.Call(Opcode::kDeleteEdge, req);
}

void ServiceClient::UpdateEmbed(Vid v, std::span<const float> embed) {
  Payload req;
  req.AddU32(Tag::kVid, v).AddFloats(Tag::kEmbedding, embed);
  transport_.Call(Opcode::kUpdateEmbed, req);
}

std::vector<float> ServiceClient::GetEmbed(Vid v) {
  Payload req;
  req.AddU32(Tag::kVid, v);
  return transport_.Call(Opcode::kGetEmbed, req).Floats(Tag::kEmbedding);
}

std::vector<Vid> ServiceClient::GetNeighbors(Vid v) {
  Payload req;
  req.AddU32(Tag::kVid, v);
  return transport_.Call(Opcode::kGetNeighbors, req).Vids(Tag::kVids);
}

RemoteRun ServiceClient::Run(const DataflowGraph& dfg, const std::map<std::string, Value>& inputs) {
  Payload req;
  req.AddText(Tag::kDfg, dfg.Save());
  for (const auto& [name, value] : inputs) req.Add(Tag::kInput, EncodeNamedValue(name, value));
  const Payload rep = transport_.Call(Opcode::kRun, req);
  RemoteRun out;
  for (const Record* r : rep.All(Tag::kOutput)) {
    auto [name, value] = DecodeNamedValue(r->data);
    out.outputs.emplace(std::move(name), std::move(value));
  }
  if (const Record* b = rep.Find(Tag::kBreakdown)) out.breakdown = DecodeBreakdown(b->data);
  return out;
}

void ServiceClient::Plugin(std::string_view path) {
  Payload req;
  req.AddText(Tag::kPath, path);
  transport_.Call(Opcode::kPlugin, req);
}

void ServiceClient::Program(std::string_view bundle_text) {
  Payload req;
  req.AddText(Tag::kBundle, bundle_text);
  transport_.Call(Opcode::kProgram, req);
}

RemoteStats ServiceClient::Stats() {
  const Payload rep = transport_.Call(Opcode::kStats, Payload{});
  RemoteStats out;
  out.counters = DecodeCounters(rep.Require(Tag::kCounters).data);
  ByteReader r(rep.Require(Tag::kStoreStats).data);
  out.store.update_requests = r.Get<uint64_t>();
  out.store.evictions = r.Get<uint64_t>();
  out.store.promotions = r.Get<uint64_t>();
  out.breakdown = DecodeBreakdown(rep.Require(Tag::kBreakdown).data);
  return out;
}

}  // namespace hgnn::rpc
