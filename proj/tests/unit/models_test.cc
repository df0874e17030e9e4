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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hgnn/models/models.h"
#include "hgnn/runner/bundle.h"
#include "hgnn/runner/runner.h"
#include "hgnn/workload/update_stream.h"
#include "test_support.h"

namespace hgnn {
namespace {

using testing::MakeDevice;
using testing::ScratchDir;

// Edge-list evaluation straight off the CSR arrays. The self entry i -> i
// carries the model's self term; every other entry j -> i the neighbor term.
std::vector<double> EdgeListOracle(const ModelConfig& cfg, const SampledBatch& b) {
  std::vector<double> x(b.embeddings.begin(), b.embeddings.end());
  size_t width = cfg.feature_len;
  size_t wi = 0;
  for (const LayerGraph& layer : b.layers) {
    std::vector<double> h(size_t{layer.num_dst} * width, 0.0);
    for (uint32_t i = 0; i < layer.num_dst; ++i) {
      const double di = layer.deg[i];
      for (uint32_t e = layer.row_ptr[i]; e < layer.row_ptr[i + 1]; ++e) {
        const uint32_t j = layer.col_idx[e];
        const double dj = layer.deg[j];
        const double norm = 1.0 / std::sqrt(di * dj);
        for (size_t f = 0; f < width; ++f) {
          const double xi = x[i * width + f], xj = x[j * width + f];
          double t = 0.0;
          if (cfg.kind == ModelKind::kGcn) t = (i == j ? xi / di : xj * norm);
          if (cfg.kind == ModelKind::kGin) t = (i == j ? (1.0 + cfg.eps) * xi : xj);
          if (cfg.kind == ModelKind::kNgcf) t = (i == j ? xi * (1 + xi) / di : xj * (1 + xi) * norm);
          h[i * width + f] += t;
        }
      }
    }
    for (uint32_t w = 0; w < cfg.WeightsPerLayer(); ++w) {
      const Tensor& wt = cfg.weights[wi++];
      std::vector<double> y(size_t{layer.num_dst} * wt.cols(), 0.0);
      for (size_t r = 0; r < layer.num_dst; ++r) {
        for (size_t c = 0; c < wt.cols(); ++c) {
          double acc = 0.0;
          for (size_t p = 0; p < width; ++p) acc += h[r * width + p] * wt.at(p, c);
          y[r * wt.cols() + c] = acc > 0 ? acc : 0;
        }
      }
      h = std::move(y);
      width = wt.cols();
    }
    x = std::move(h);
  }
  return x;
}

double MaxRel(const std::vector<double>& want, const Tensor& got) {
  double scale = 1e-12, err = 0;
  for (double v : want) scale = std::max(scale, std::abs(v));
  EXPECT_EQ(want.size(), got.data().size());
  for (size_t i = 0; i < want.size() && i < got.data().size(); ++i) {
    err = std::max(err, std::abs(want[i] - got.data()[i]));
  }
  return err / scale;
}

class ModelFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    dev_ = MakeDevice(dir_, 1024, 2048);
    store_ = std::make_unique<GraphStore>(*dev_);
    store_->UpdateGraph(FormatEdgeText(GeneratePowerLawGraph(300, 1500, 1.0, 17)),
                        FormatEmbeddingText(300, 12, 18));
  }
  SampledBatch Sample(std::vector<Vid> targets, uint32_t k, uint64_t seed) {
    return SampleBatch(*store_, BatchRequest{std::move(targets), std::vector<uint32_t>(k, 4), seed});
  }

  ScratchDir dir_;
  std::unique_ptr<SimulatedSsd> dev_;
  std::unique_ptr<GraphStore> store_;
};

TEST(Models, SingleLayerGcnMatchesFigureChain) {
  const DataflowGraph g = BuildDfg(RandomModel(ModelKind::kGcn, 1, 4, {3}, 1));
  EXPECT_NE(g.Save().find("3: \"GEMM\" in={\"2_0\",\"Weight\"} out={\"3_0\"}\n"), std::string::npos)
      << g.Save();
  std::vector<std::string> ops;
  for (const DfgNode& n : g.nodes()) ops.push_back(n.op);
  EXPECT_EQ(ops, (std::vector<std::string>{"BatchPre", "SpMM_Mean", "GEMM", "ReLU"}));
  EXPECT_EQ(g.outputs().at("Result"), "4_0");
}

TEST(Models, NodeCountsAndWeightNames) {
  for (uint32_t k = 1; k <= 3; ++k) {
    const std::vector<uint32_t> hidden(k, 4);
    EXPECT_EQ(BuildDfg(RandomModel(ModelKind::kGcn, k, 4, hidden, 1)).nodes().size(), 1 + 3 * k);
    EXPECT_EQ(BuildDfg(RandomModel(ModelKind::kNgcf, k, 4, hidden, 1)).nodes().size(), 1 + 3 * k);
    EXPECT_EQ(BuildDfg(RandomModel(ModelKind::kGin, k, 4, hidden, 1)).nodes().size(), 1 + 5 * k);
  }
  const ModelConfig gin = RandomModel(ModelKind::kGin, 2, 4, {5, 3}, 1);
  EXPECT_EQ(gin.WeightNames(), (std::vector<std::string>{"Weight_1", "Weight_2", "Weight_3", "Weight_4"}));
  const DataflowGraph g = BuildDfg(gin);
  EXPECT_EQ(std::count_if(g.nodes().begin(), g.nodes().end(),
                          [](const DfgNode& n) { return n.op == "GEMM"; }),
            4);
  EXPECT_EQ(g.inputs(), (std::vector<std::string>{"Batch", "Weight_1", "Weight_2", "Weight_3",
                                                  "Weight_4", "Epsilon"}));
  EXPECT_EQ(gin.weights[1].shape(), (std::vector<size_t>{5, 5}));
}

TEST(Models, ConfigErrors) {
  EXPECT_EQ(ParseModelKind("GiN"), ModelKind::kGin);
  EXPECT_THROW(ParseModelKind("gat"), Error);
  EXPECT_THROW(RandomModel(ModelKind::kGcn, 2, 4, {3}, 1), Error);
  ModelConfig cfg = RandomModel(ModelKind::kGcn, 2, 4, {3, 2}, 1);
  cfg.weights[1] = Tensor::Zeros({2, 2});
  EXPECT_THROW(BuildDfg(cfg), Error);
}

TEST_F(ModelFixture, RunnerAndDenseReferenceMatchEdgeListOracle) {
  std::mt19937_64 rng(5);
  GraphRunner runner(store_.get());
  for (int trial = 0; trial < 12; ++trial) {
    const ModelKind kind = std::array{ModelKind::kGcn, ModelKind::kGin, ModelKind::kNgcf}[trial % 3];
    const uint32_t k = 1 + trial % 3;
    std::vector<uint32_t> hidden;
    for (uint32_t l = 0; l < k; ++l) hidden.push_back(2 + rng() % 9);
    const ModelConfig cfg = RandomModel(kind, k, 12, hidden, rng(), trial % 2 ? 0.5f : 0.0f);
    std::vector<Vid> targets;
    for (int t = 0; t < 5; ++t) targets.push_back(static_cast<Vid>(rng() % 300));
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    const SampledBatch b = Sample(targets, k, rng());
    const std::vector<double> oracle = EdgeListOracle(cfg, b);
    EXPECT_LE(MaxRel(oracle, DenseReference(cfg, b)), 1e-6) << trial;
    if (trial % 2) runner.Program(Table3Bundle()); else runner.Program("");
    const auto out = runner.Execute(BuildDfg(cfg), BuildInputs(cfg, b));
    EXPECT_LE(MaxRel(oracle, std::get<Tensor>(out.outputs.at("Result"))), 1e-5) << trial;
  }
}

// Relabels the target ids [0, T) by `perm`; every other id keeps its label.
SampledBatch PermuteTargets(const SampledBatch& b, const std::vector<uint32_t>& perm) {
  auto map = [&](uint32_t id) { return id < perm.size() ? perm[id] : id; };
  SampledBatch out = b;
  const size_t F = b.feature_len;
  for (uint32_t id = 0; id < b.num_sampled(); ++id) {
    out.original_ids[map(id)] = b.original_ids[id];
    std::copy_n(b.embeddings.begin() + id * F, F, out.embeddings.begin() + map(id) * F);
  }
  for (const auto& [vid, id] : b.new_ids) out.new_ids[vid] = map(id);
  for (size_t l = 0; l < b.layers.size(); ++l) {
    const LayerGraph& in = b.layers[l];
    LayerGraph& o = out.layers[l];
    std::vector<std::vector<uint32_t>> rows(in.num_dst);
    for (uint32_t i = 0; i < in.num_dst; ++i) {
      for (uint32_t e = in.row_ptr[i]; e < in.row_ptr[i + 1]; ++e) rows[map(i)].push_back(map(in.col_idx[e]));
      o.deg[map(i)] = in.deg[i];
    }
    for (uint32_t j = in.num_dst; j < in.num_src; ++j) o.deg[map(j)] = in.deg[j];
    o.col_idx.clear();
    for (uint32_t i = 0; i < in.num_dst; ++i) {
      std::sort(rows[i].begin(), rows[i].end());
      o.row_ptr[i + 1] = o.row_ptr[i] + static_cast<uint32_t>(rows[i].size());
      o.col_idx.insert(o.col_idx.end(), rows[i].begin(), rows[i].end());
    }
  }
  return out;
}

TEST_F(ModelFixture, RelabelingTargetsPermutesOutputRows) {
  std::mt19937_64 rng(8);
  GraphRunner runner(store_.get());
  for (ModelKind kind : {ModelKind::kGcn, ModelKind::kGin, ModelKind::kNgcf}) {
    const ModelConfig cfg = RandomModel(kind, 2, 12, {7, 4}, rng(), 0.5f);
    const SampledBatch b = Sample({3, 40, 77, 150, 222, 299}, 2, rng());
    std::vector<uint32_t> perm(b.num_targets());
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    const SampledBatch p = PermuteTargets(b, perm);
    for (const LayerGraph& l : p.layers) l.Validate();
    const Tensor base = std::get<Tensor>(runner.Execute(BuildDfg(cfg), BuildInputs(cfg, b)).outputs.at("Result"));
    const Tensor moved = std::get<Tensor>(runner.Execute(BuildDfg(cfg), BuildInputs(cfg, p)).outputs.at("Result"));
    ASSERT_EQ(base.shape(), moved.shape());
    for (size_t r = 0; r < base.rows(); ++r) {
      for (size_t c = 0; c < base.cols(); ++c) {
        EXPECT_NEAR(moved.at(perm[r], c), base.at(r, c), 1e-5 * (1 + std::abs(base.at(r, c))));
      }
    }
  }
}

TEST_F(ModelFixture, GinAggregationIsAffineInEpsilon) {
  GraphRunner runner(store_.get());
  DataflowGraph g;
  g.CreateIn("Batch");
  g.CreateIn("Epsilon");
  g.CreateOp("BatchPre", {"Batch"});
  g.CreateOp("SpMM_Sum", {"1_0", "Epsilon"});
  g.CreateOut("H", "2_0");
  const SampledBatch b = Sample({1, 2, 3, 100}, 1, 4);
  auto run = [&](float eps) {
    return std::get<Tensor>(runner.Execute(g, {{"Batch", b}, {"Epsilon", Scalar{eps}}}).outputs.at("H"));
  };
  const Tensor h0 = run(0), h1 = run(1), h05 = run(0.5f), h2 = run(2);
  const size_t F = b.feature_len;
  for (size_t i = 0; i < h0.rows(); ++i) {
    for (size_t f = 0; f < F; ++f) {
      const double x = b.embeddings[i * F + f];
      EXPECT_NEAR(h1.at(i, f) - h0.at(i, f), x, 1e-5);
      EXPECT_NEAR(h05.at(i, f) - h0.at(i, f), 0.5 * x, 1e-5);
      EXPECT_NEAR(h2.at(i, f) - h0.at(i, f), 2 * x, 1e-5);
    }
  }
}

TEST(ModelWeights, CodecRoundTripAndCorruption) {
  ScratchDir dir;
  for (ModelKind kind : {ModelKind::kGcn, ModelKind::kGin, ModelKind::kNgcf}) {
    const ModelConfig cfg = RandomModel(kind, 2, 6, {4, 3}, 11, 0.25f);
    const std::vector<uint8_t> bytes = EncodeWeights(cfg);
    size_t floats = 0;
    for (const Tensor& t : cfg.weights) floats += t.data().size();
    EXPECT_EQ(bytes.size(), 8 + 4 * 5 + 4 * 2 + 4 * floats);
    EXPECT_EQ(DecodeWeights(bytes), cfg);
    SaveWeights(dir.File("w.bin"), cfg);
    EXPECT_EQ(LoadWeights(dir.File("w.bin")), cfg);

    auto code_of = [](std::vector<uint8_t> b) {
      try {
        DecodeWeights(b);
      } catch (const Error& e) {
        return e.code();
      }
      return Errc::kInternal;
    };
    std::vector<uint8_t> bad = bytes;
    bad[0] = 'X';
    EXPECT_EQ(code_of(bad), Errc::kDataLoss);
    bad = bytes;
    bad.pop_back();
    EXPECT_EQ(code_of(bad), Errc::kDataLoss);
    bad = bytes;
    bad.push_back(0);
    EXPECT_EQ(code_of(bad), Errc::kDataLoss);
  }
  EXPECT_THROW(LoadWeights(dir.File("absent.bin")), Error);
}

}  // namespace
}  // namespace hgnn
