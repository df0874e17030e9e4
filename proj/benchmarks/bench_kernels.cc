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

#include <random>
#include <set>

#include "hgnn/kernels/kernels.h"

namespace hgnn {
namespace {

Tensor RandomMatrix(size_t rows, size_t cols, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<float> data(rows * cols);
  for (float& v : data) v = u(rng);
  return Tensor::Matrix(rows, cols, std::move(data));
}

BackendParams ParamsFor(int64_t backend) {
  BackendParams p;
  p.kind = static_cast<Backend>(backend);
  return p;
}

void BM_Gemm(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  const BackendParams p = ParamsFor(state.range(1));
  const Tensor a = RandomMatrix(n, n, 1), b = RandomMatrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Gemm(a, b, p));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n * n));
  state.SetLabel(BackendName(p.kind));
}
BENCHMARK(BM_Gemm)->ArgsProduct({{32, 128, 256}, {0, 1, 2}});

// One sampled hop: `dst` targets, each with 10 sampled neighbors among 11x sources.
LayerGraph SyntheticLayer(uint32_t dst) {
  std::mt19937_64 rng(3);
  LayerGraph l;
  l.num_dst = dst;
  l.num_src = dst * 11;
  l.row_ptr.push_back(0);
  for (uint32_t i = 0; i < dst; ++i) {
    std::set<uint32_t> cols{i};
    while (cols.size() < 11) cols.insert(static_cast<uint32_t>(rng() % l.num_src));
    l.col_idx.insert(l.col_idx.end(), cols.begin(), cols.end());
    l.row_ptr.push_back(static_cast<uint32_t>(l.col_idx.size()));
  }
  l.deg.resize(l.num_src);
  for (auto& d : l.deg) d = 1 + static_cast<uint32_t>(rng() % 50);
  return l;
}

void BM_Spmm(benchmark::State& state) {
  const LayerGraph layer = SyntheticLayer(static_cast<uint32_t>(state.range(0)));
  const BackendParams p = ParamsFor(state.range(1));
  const Tensor x = RandomMatrix(layer.num_src, 64, 4);
  for (auto _ : state) benchmark::DoNotOptimize(Spmm(SpmmMode::kGcnMean, layer, x, 0.0f, p));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(layer.num_edges()));
  state.SetLabel(BackendName(p.kind));
}
BENCHMARK(BM_Spmm)->ArgsProduct({{64, 512}, {0, 1, 2}});

void BM_Sddmm(benchmark::State& state) {
  const LayerGraph layer = SyntheticLayer(static_cast<uint32_t>(state.range(0)));
  const Tensor a = RandomMatrix(layer.num_src, 64, 5), b = RandomMatrix(layer.num_src, 64, 6);
  for (auto _ : state) benchmark::DoNotOptimize(Sddmm(layer, a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(layer.num_edges()));
}
BENCHMARK(BM_Sddmm)->Arg(64)->Arg(512);

}  // namespace
}  // namespace hgnn

BENCHMARK_MAIN();
