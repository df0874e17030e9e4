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


#include <benchmark/benchmark.h>
#include <stdlib.h>

#include <filesystem>
#include <random>
#include <set>

#include "hgnn/batchprep/sampler.h"
#include "hgnn/graphstore/graph_store.h"
#include "hgnn/models/models.h"
#include "hgnn/runner/runner.h"
#include "hgnn/workload/update_stream.h"

namespace hgnn {
namespace {

// A store over a temporary image, removed on destruction.
class BenchStore {
 public:
  BenchStore(uint32_t vertices, uint64_t edges, uint32_t features) {
    std::string tmpl = (std::filesystem::temp_directory_path() / "hgnn-bench-XXXXXX").string();
    if (mkdtemp(tmpl.data()) == nullptr) std::abort();
    dir_ = tmpl;
    device_ = SimulatedSsd::Create(DeviceGeometry{4096, 65536, dir_ / "bench.img"});
    store_ = std::make_unique<GraphStore>(*device_);
    edge_text_ = FormatEdgeText(GeneratePowerLawGraph(vertices, edges, 1.0, 7));
    embed_text_ = FormatEmbeddingText(vertices, features, 8);
    store_->UpdateGraph(edge_text_, embed_text_, IngestOptions{vertices * 2});
  }
  ~BenchStore() {
    store_.reset();
    device_.reset();
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  GraphStore& store() { return *store_; }
  const std::string& edge_text() const { return edge_text_; }
  const std::string& embed_text() const { return embed_text_; }

 private:
  std::filesystem::path dir_;
  std::unique_ptr<SimulatedSsd> device_;
  std::unique_ptr<GraphStore> store_;
  std::string edge_text_, embed_text_;
};

constexpr uint32_t kVertices = 20000;

// `n` distinct random targets.
std::vector<Vid> Targets(std::mt19937_64& rng, uint32_t n) {
  std::set<Vid> picked;
  while (picked.size() < n) picked.insert(static_cast<Vid>(rng() % kVertices));
  return {picked.begin(), picked.end()};
}

void BM_Ingest(benchmark::State& state) {
  BenchStore b(kVertices, 100000, static_cast<uint32_t>(state.range(0)));
  for (auto _ : state) b.store().UpdateGraph(b.edge_text(), b.embed_text());
  state.SetBytesProcessed(state.iterations() *
                          static_cast<int64_t>(b.edge_text().size() + b.embed_text().size()));
}
BENCHMARK(BM_Ingest)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_GetNeighbors(benchmark::State& state) {
  BenchStore b(kVertices, 100000, 16);
  std::mt19937_64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(b.store().GetNeighbors(static_cast<Vid>(rng() % kVertices)));
}
BENCHMARK(BM_GetNeighbors);

void BM_GetEmbed(benchmark::State& state) {
  BenchStore b(kVertices, 100000, static_cast<uint32_t>(state.range(0)));
  std::mt19937_64 rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(b.store().GetEmbed(static_cast<Vid>(rng() % kVertices)));
}
BENCHMARK(BM_GetEmbed)->Arg(16)->Arg(1024);

void BM_AddDeleteEdge(benchmark::State& state) {
  BenchStore b(kVertices, 100000, 16);
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    const Vid a = static_cast<Vid>(rng() % kVertices), c = static_cast<Vid>(rng() % kVertices);
    b.store().AddEdge(a, c);
    if (a != c) b.store().DeleteEdge(a, c);
  }
  state.counters["evictions"] = static_cast<double>(b.store().stats().evictions);
}
BENCHMARK(BM_AddDeleteEdge);

void BM_SampleBatch(benchmark::State& state) {
  BenchStore b(kVertices, 100000, 64);
  std::mt19937_64 rng(4);
  const uint32_t batch = static_cast<uint32_t>(state.range(0));
  uint64_t pages = 0;
  for (auto _ : state) {
    BatchRequest req;
    req.targets = Targets(rng, batch);
    req.fanouts = {10, 10};
    req.seed = rng();
    pages += SampleBatch(b.store(), req).io_pages;
  }
  state.counters["pages/batch"] = benchmark::Counter(static_cast<double>(pages), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SampleBatch)->Arg(8)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_GcnInference(benchmark::State& state) {
  BenchStore b(kVertices, 100000, 64);
  GraphRunner runner(&b.store());
  const ModelConfig cfg = RandomModel(ModelKind::kGcn, 2, 64, {64, 16}, 5);
  const DataflowGraph dfg = BuildDfg(cfg);
  std::mt19937_64 rng(6);
  for (auto _ : state) {
    BatchRequest req;
    req.targets = Targets(rng, 32);
    req.fanouts = {10, 10};
    req.seed = rng();
    benchmark::DoNotOptimize(runner.Execute(dfg, BuildInputs(cfg, req)));
  }
}
BENCHMARK(BM_GcnInference)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace hgnn

BENCHMARK_MAIN();
