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


#include "commands.h"

#include <signal.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>

#include "hgnn/blockdev/simulated_ssd.h"
#include "hgnn/common/error.h"
#include "hgnn/dfg/dfg.h"
#include "hgnn/graphstore/graph_store.h"
#include "hgnn/models/models.h"
#include "hgnn/rpc/client.h"
#include "hgnn/rpc/service.h"
#include "hgnn/rpc/transport.h"
#include "hgnn/runner/runner.h"
#include "hgnn/workload/stream_replay.h"
#include "json.hpp"

namespace hgnn::cli {

namespace {

using nlohmann::ordered_json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Throw(Errc::kIo, "cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void WriteFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) Throw(Errc::kIo, "cannot write " + path);
}

void Emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

ordered_json CountersJson(const IoCounterSet& c) {
  return {{"pages_read", c.pages_read},
          {"pages_written", c.pages_written},
          {"pages_trimmed", c.pages_trimmed},
          {"rmw_count", c.rmw_count}};
}

ordered_json CountersJson(const IoCounters& c) {
  ordered_json by_tag = ordered_json::object();
  for (const auto& [tag, set] : c.by_tag) by_tag[tag] = CountersJson(set);
  return {{"total", CountersJson(c.total)}, {"by_tag", by_tag}};
}

void PrintCounters(const IoCounters& c) {
  auto line = [](const std::string& name, const IoCounterSet& s) {
    std::printf("  %-20s read=%llu written=%llu trimmed=%llu rmw=%llu\n", name.c_str(),
                static_cast<unsigned long long>(s.pages_read),
                static_cast<unsigned long long>(s.pages_written),
                static_cast<unsigned long long>(s.pages_trimmed),
                static_cast<unsigned long long>(s.rmw_count));
  };
  std::printf("io counters:\n");
  line("total", c.total);
  for (const auto& [tag, set] : c.by_tag) line(tag, set);
}

ordered_json BreakdownJson(const Breakdown& b) {
  return {{"graph_prep_ns", b.graph_prep_ns},
          {"batch_prep_ns", b.batch_prep_ns},
          {"batch_io_pages", b.batch_io_pages},
          {"infer_ns", b.infer_ns}};
}

ordered_json StoreStatsJson(const StoreStats& s) {
  return {{"update_requests", s.update_requests},
          {"evictions", s.evictions},
          {"promotions", s.promotions}};
}

std::string FormatFloat(float v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
  return buf;
}

// Deterministic rendering of run outputs; identical for local and remote runs.
std::string RenderOutputs(const std::map<std::string, Value>& outputs, bool json) {
  std::ostringstream os;
  if (json) {
    ordered_json j = ordered_json::object();
    for (const auto& [name, value] : outputs) {
      if (const auto* t = std::get_if<Tensor>(&value)) {
        j[name] = {{"shape", t->shape()}, {"data", t->data()}};
      } else if (const auto* s = std::get_if<Scalar>(&value)) {
        j[name] = {{"scalar", s->value}};
      } else {
        j[name] = {{"kind", ValueKindName(value)}};
      }
    }
    os << ordered_json{{"outputs", j}}.dump(2) << "\n";
    return os.str();
  }
  for (const auto& [name, value] : outputs) {
    if (const auto* t = std::get_if<Tensor>(&value)) {
      os << name << " " << t->ShapeString() << "\n";
      const size_t cols = t->cols();
      for (size_t i = 0; i < t->data().size(); ++i) {
        os << FormatFloat(t->data()[i]) << ((cols == 0 || (i + 1) % cols == 0) ? "\n" : " ");
      }
    } else if (const auto* s = std::get_if<Scalar>(&value)) {
      os << name << " scalar " << s->value << "\n";
    } else {
      os << name << " " << ValueKindName(value) << "\n";
    }
  }
  return os.str();
}

void RequireOneTarget(const TargetOptions& t) {
  if (t.image.empty() == t.endpoint.empty()) {
    throw UsageError("exactly one of --image and --endpoint is required");
  }
}

std::map<std::string, Value> RunInputs(const RunOptions& o, const DataflowGraph& dfg) {
  BatchRequest req;
  req.targets = o.targets;
  if (req.targets.empty()) {
    for (uint32_t v = 0; v < o.batch; ++v) req.targets.push_back(v);
  }
  req.fanouts = o.fanout;
  req.seed = o.seed;
  req.count_self_in_fanout = o.count_self;
  std::map<std::string, Value> inputs;
  if (!o.weights.empty()) {
    inputs = BuildInputs(LoadWeights(o.weights), req);
  } else {
    inputs.emplace(std::string(kBatchInput), req);
  }
  for (const std::string& name : dfg.inputs()) {
    if (!inputs.count(name)) Throw(Errc::kNotFound, "no value for DFG input \"" + name + "\"");
  }
  return inputs;
}

}  // namespace

int RunCreate(const CreateOptions& o, bool json) {
  auto dev = SimulatedSsd::Create(DeviceGeometry{o.page_size, o.pages, o.image});
  if (json) {
    Emit({{"image", o.image}, {"page_size", dev->page_size()}, {"pages", dev->page_count()}});
  } else {
    std::printf("created %s: %llu pages of %u bytes\n", o.image.c_str(),
                static_cast<unsigned long long>(dev->page_count()), dev->page_size());
  }
  return kExitOk;
}

int RunIngest(const IngestOptionsCli& o, bool json) {
  auto dev = SimulatedSsd::Open(o.image);
  GraphStore store(*dev);
  const std::string edges = ReadFile(o.graph);
  const std::string embeds = ReadFile(o.embed);
  const IngestReport r = store.UpdateGraph(edges, embeds, IngestOptions{o.min_capacity});
  if (json) {
    Emit({{"vertices", r.vertex_count},
          {"edges", r.edge_count},
          {"capacity", store.capacity()},
          {"feature_len", store.feature_len()},
          {"prep_ns", {r.prep_start_ns, r.prep_end_ns}},
          {"embed_write_ns", {r.embed_write_start_ns, r.embed_write_end_ns}},
          {"prep_overlapped", r.PrepOverlapped()}});
  } else {
    std::printf("ingested %u vertices, %llu edges (capacity %u, F=%u)\n", r.vertex_count,
                static_cast<unsigned long long>(r.edge_count), store.capacity(), store.feature_len());
    std::printf("graph prep     [%lld, %lld] ns\n", static_cast<long long>(r.prep_start_ns),
                static_cast<long long>(r.prep_end_ns));
    std::printf("embed write    [%lld, %lld] ns\n", static_cast<long long>(r.embed_write_start_ns),
                static_cast<long long>(r.embed_write_end_ns));
    std::printf("prep overlapped: %s\n", r.PrepOverlapped() ? "yes" : "no");
  }
  return kExitOk;
}

int RunRun(const RunOptions& o, bool json) {
  RequireOneTarget(o.target);
  if (o.batch == 0 && o.targets.empty()) throw UsageError("one of --batch and --targets is required");
  if (o.batch != 0 && !o.targets.empty()) throw UsageError("--batch and --targets are exclusive");
  if (o.fanout.empty()) throw UsageError("--fanout needs at least one hop");
  const DataflowGraph dfg = DataflowGraph::Load(ReadFile(o.dfg));
  const std::string bundle = o.program.empty() ? std::string() : ReadFile(o.program);

  std::map<std::string, Value> outputs;
  Breakdown breakdown;
  if (!o.target.endpoint.empty()) {
    rpc::SocketTransport transport(rpc::Endpoint::Parse(o.target.endpoint));
    rpc::ServiceClient client(transport);
    for (const std::string& p : o.plugins) client.Plugin(p);
    if (!o.program.empty()) client.Program(bundle);
    rpc::RemoteRun r = client.Run(dfg, RunInputs(o, dfg));
    outputs = std::move(r.outputs);
    breakdown = r.breakdown;
  } else {
    auto dev = SimulatedSsd::Open(o.target.image);
    GraphStore store(*dev);
    GraphRunner runner(&store);
    for (const std::string& p : o.plugins) runner.Plugin(p);
    if (!o.program.empty()) runner.Program(bundle);
    ExecutionResult r = runner.Execute(dfg, RunInputs(o, dfg));
    outputs = std::move(r.outputs);
    breakdown = r.breakdown;
  }
  std::cout << RenderOutputs(outputs, json);
  // Timing varies run to run, so it stays off stdout.
  if (json) {
    std::cerr << ordered_json{{"breakdown", BreakdownJson(breakdown)}}.dump() << "\n";
  } else {
    std::fprintf(stderr, "breakdown: graph_prep=%lldns batch_prep=%lldns batch_io=%llu pages infer=%lldns\n",
                 static_cast<long long>(breakdown.graph_prep_ns),
                 static_cast<long long>(breakdown.batch_prep_ns),
                 static_cast<unsigned long long>(breakdown.batch_io_pages),
                 static_cast<long long>(breakdown.infer_ns));
  }
  return kExitOk;
}

int RunServe(const ServeOptions& o, bool json) {
  auto dev = SimulatedSsd::Open(o.image);
  GraphStore store(*dev);
  GraphRunner runner(&store);
  for (const std::string& p : o.plugins) runner.Plugin(p);
  if (!o.program.empty()) runner.Program(ReadFile(o.program));
  rpc::Service service(store, runner);
  rpc::Server server(service);

  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  const rpc::Endpoint bound = server.Start(rpc::Endpoint::Parse(o.endpoint));
  if (json) {
    std::cout << ordered_json{{"listening", bound.ToString()}}.dump() << std::endl;
  } else {
    std::cout << "listening on " << bound.ToString() << std::endl;
  }
  int sig = 0;
  sigwait(&stop_signals, &sig);
  server.Stop();
  store.Sync();
  return kExitOk;
}

int RunStream(const StreamOptions& o, bool json) {
  auto dev = SimulatedSsd::Open(o.image);
  GraphStore store(*dev);
  if (!store.formatted()) Throw(Errc::kFailedPrecondition, "image holds no graph; run ingest first");
  ordered_json days = ordered_json::array();
  const ReplayReport r = ReplayStream(store, o.spec, [&](const DayReport& d) {
    if (json) {
      days.push_back({{"day", d.day},
                      {"operations", d.operations},
                      {"elapsed_ns", d.elapsed_ns},
                      {"mean_op_ns", d.mean_op_ns()},
                      {"evictions", d.evictions}});
    } else {
      std::printf("day %4u  ops %6llu  elapsed %10.3f ms  mean %9.0f ns/op  evictions %llu\n", d.day,
                  static_cast<unsigned long long>(d.operations), static_cast<double>(d.elapsed_ns) / 1e6,
                  d.mean_op_ns(), static_cast<unsigned long long>(d.evictions));
      std::fflush(stdout);
    }
  });
  store.Sync();
  if (json) {
    Emit({{"days", days},
          {"update_requests", r.update_requests},
          {"evictions", r.evictions},
          {"promotions", r.promotions},
          {"eviction_fraction", r.eviction_fraction()}});
  } else {
    std::printf("update requests %llu  evictions %llu  promotions %llu\n",
                static_cast<unsigned long long>(r.update_requests),
                static_cast<unsigned long long>(r.evictions),
                static_cast<unsigned long long>(r.promotions));
    std::printf("eviction fraction %.6f\n", r.eviction_fraction());
  }
  return kExitOk;
}

int RunStats(const TargetOptions& o, bool json) {
  RequireOneTarget(o);
  IoCounters counters;
  StoreStats stats;
  std::optional<Breakdown> breakdown;
  ordered_json extra = ordered_json::object();
  if (!o.endpoint.empty()) {
    rpc::SocketTransport transport(rpc::Endpoint::Parse(o.endpoint));
    const rpc::RemoteStats r = rpc::ServiceClient(transport).Stats();
    counters = r.counters;
    stats = r.store;
    breakdown = r.breakdown;
  } else {
    auto dev = SimulatedSsd::Open(o.image);
    GraphStore store(*dev);
    if (store.formatted()) {
      stats = store.stats();
      extra = {{"live_vertices", store.LiveVertices().size()},
               {"capacity", store.capacity()},
               {"feature_len", store.feature_len()},
               {"page_size", dev->page_size()},
               {"pages", dev->page_count()}};
    }
    counters = dev->SnapshotCounters();
  }
  if (json) {
    ordered_json j = {{"io", CountersJson(counters)}, {"store", StoreStatsJson(stats)}};
    if (breakdown) j["breakdown"] = BreakdownJson(*breakdown);
    if (!extra.empty()) j["image"] = extra;
    Emit(j);
    return kExitOk;
  }
  for (const auto& [key, value] : extra.items()) std::printf("%s: %s\n", key.c_str(), value.dump().c_str());
  std::printf("update requests %llu  evictions %llu  promotions %llu\n",
              static_cast<unsigned long long>(stats.update_requests),
              static_cast<unsigned long long>(stats.evictions),
              static_cast<unsigned long long>(stats.promotions));
  PrintCounters(counters);
  if (breakdown) {
    std::printf("last run: graph_prep=%lldns batch_prep=%lldns batch_io=%llu pages infer=%lldns\n",
                static_cast<long long>(breakdown->graph_prep_ns),
                static_cast<long long>(breakdown->batch_prep_ns),
                static_cast<unsigned long long>(breakdown->batch_io_pages),
                static_cast<long long>(breakdown->infer_ns));
  }
  return kExitOk;
}

int RunSynth(const SynthOptions& o, bool json) {
  const std::vector<Edge> edges = GeneratePowerLawGraph(o.vertices, o.edges, o.attachment, o.seed);
  WriteFile(o.graph, FormatEdgeText(edges));
  WriteFile(o.embed, FormatEmbeddingText(o.vertices, o.features, o.seed + 1));
  if (json) {
    Emit({{"graph", o.graph}, {"embed", o.embed}, {"vertices", o.vertices}, {"edges", edges.size()}});
  } else {
    std::printf("wrote %zu edges to %s and %u x %u embeddings to %s\n", edges.size(), o.graph.c_str(),
                o.vertices, o.features, o.embed.c_str());
  }
  return kExitOk;
}

int RunModel(const ModelOptions& o, bool json) {
  if (o.weights_out.empty() && o.dfg_out.empty()) {
    throw UsageError("nothing to write; pass --weights-out and/or --dfg-out");
  }
  std::vector<uint32_t> hidden = o.hidden;
  if (hidden.empty()) hidden.assign(o.layers, 16);
  if (hidden.size() != o.layers) throw UsageError("--hidden needs one width per layer");
  const ModelConfig cfg = RandomModel(ParseModelKind(o.kind), o.layers, o.features, hidden, o.seed, o.eps);
  if (!o.weights_out.empty()) SaveWeights(o.weights_out, cfg);
  if (!o.dfg_out.empty()) WriteFile(o.dfg_out, BuildDfg(cfg).Save());
  if (json) {
    Emit({{"kind", ModelKindName(cfg.kind)},
          {"layers", cfg.layers},
          {"weights", cfg.WeightNames()},
          {"weights_out", o.weights_out},
          {"dfg_out", o.dfg_out}});
  } else {
    std::printf("%s model, %u layers, weights %s\n", ModelKindName(cfg.kind), cfg.layers,
                o.weights_out.empty() ? "(not written)" : o.weights_out.c_str());
  }
  return kExitOk;
}

}  // namespace hgnn::cli
