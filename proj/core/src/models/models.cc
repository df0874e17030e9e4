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


#include "hgnn/models/models.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>

#include "hgnn/common/error.h"
#include "hgnn/common/le_bytes.h"

namespace hgnn {

const char* ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGcn:
      return "gcn";
    case ModelKind::kGin:
      return "gin";
    case ModelKind::kNgcf:
      return "ngcf";
  }
  return "unknown";
}

ModelKind ParseModelKind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "gcn") return ModelKind::kGcn;
  if (lower == "gin") return ModelKind::kGin;
  if (lower == "ngcf") return ModelKind::kNgcf;
  Throw(Errc::kInvalidArgument, "unknown model kind \"" + std::string(name) + "\"");
}

uint32_t ModelConfig::InputWidth(uint32_t layer) const {
  return layer == 0 ? feature_len : hidden.at(layer - 1);
}

std::vector<std::string> ModelConfig::WeightNames() const {
  const uint32_t m = layers * WeightsPerLayer();
  if (m == 1) return {"Weight"};
  std::vector<std::string> names;
  for (uint32_t i = 1; i <= m; ++i) names.push_back("Weight_" + std::to_string(i));
  return names;
}

void ModelConfig::Validate() const {
  if (layers == 0) Throw(Errc::kInvalidArgument, "model needs at least one layer");
  if (feature_len == 0) Throw(Errc::kInvalidArgument, "feature length must be positive");
  if (hidden.size() != layers) Throw(Errc::kInvalidArgument, "need one hidden width per layer");
  if (!std::isfinite(eps)) Throw(Errc::kInvalidArgument, "eps must be finite");
  const uint32_t per = WeightsPerLayer();
  if (weights.size() != size_t{layers} * per) {
    Throw(Errc::kInvalidArgument, "expected " + std::to_string(layers * per) + " weight matrices, got " +
                                      std::to_string(weights.size()));
  }
  for (uint32_t l = 0; l < layers; ++l) {
    if (hidden[l] == 0) Throw(Errc::kInvalidArgument, "hidden widths must be positive");
    for (uint32_t w = 0; w < per; ++w) {
      const Tensor& t = weights[l * per + w];
      const size_t rows = w == 0 ? InputWidth(l) : hidden[l];
      if (t.rank() != 2 || t.rows() != rows || t.cols() != hidden[l]) {
        Throw(Errc::kInvalidArgument, "layer " + std::to_string(l + 1) + " weight " + std::to_string(w + 1) +
                                          " has shape " + t.ShapeString() + ", expected [" +
                                          std::to_string(rows) + "x" + std::to_string(hidden[l]) + "]");
      }
    }
  }
}

ModelConfig RandomModel(ModelKind kind, uint32_t layers, uint32_t feature_len,
                        std::vector<uint32_t> hidden, uint64_t seed, float eps) {
  ModelConfig cfg;
  cfg.kind = kind;
  cfg.layers = layers;
  cfg.feature_len = feature_len;
  cfg.hidden = std::move(hidden);
  cfg.eps = eps;
  if (cfg.hidden.size() != layers) Throw(Errc::kInvalidArgument, "need one hidden width per layer");
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (uint32_t l = 0; l < layers; ++l) {
    for (uint32_t w = 0; w < cfg.WeightsPerLayer(); ++w) {
      const size_t rows = w == 0 ? cfg.InputWidth(l) : cfg.hidden[l];
      const size_t cols = cfg.hidden[l];
      const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
      std::vector<float> data(rows * cols);
      for (float& v : data) v = static_cast<float>((2.0 * unit() - 1.0) * scale);
      cfg.weights.push_back(Tensor::Matrix(rows, cols, std::move(data)));
    }
  }
  cfg.Validate();
  return cfg;
}

namespace {

const char* SpmmOpName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kGcn:
      return "SpMM_Mean";
    case ModelKind::kGin:
      return "SpMM_Sum";
    case ModelKind::kNgcf:
      return "SpMM_NGCF";
  }
  return "";
}

}  // namespace

DataflowGraph BuildDfg(const ModelConfig& cfg) {
  cfg.Validate();
  const std::vector<std::string> weight_names = cfg.WeightNames();
  DataflowGraph g;
  g.CreateIn(std::string(kBatchInput));
  for (const std::string& name : weight_names) g.CreateIn(name);
  if (cfg.kind == ModelKind::kGin) g.CreateIn(std::string(kEpsilonInput));

  std::string batch = DataflowGraph::OutputLabel(g.CreateOp("BatchPre", {std::string(kBatchInput)}), 0);
  std::string features;
  size_t next_weight = 0;
  for (uint32_t l = 0; l < cfg.layers; ++l) {
    std::vector<std::string> in{batch};
    if (!features.empty()) in.push_back(features);
    if (cfg.kind == ModelKind::kGin) in.push_back(std::string(kEpsilonInput));
    const bool last = l + 1 == cfg.layers;
    const uint32_t agg = g.CreateOp(SpmmOpName(cfg.kind), in, last ? 1 : 2);
    if (!last) batch = DataflowGraph::OutputLabel(agg, 1);
    std::string x = DataflowGraph::OutputLabel(agg, 0);
    for (uint32_t w = 0; w < cfg.WeightsPerLayer(); ++w) {
      const uint32_t mm = g.CreateOp("GEMM", {x, weight_names[next_weight++]});
      const uint32_t act = g.CreateOp("ReLU", {DataflowGraph::OutputLabel(mm, 0)});
      x = DataflowGraph::OutputLabel(act, 0);
    }
    features = x;
  }
  g.CreateOut(std::string(kResultOutput), features);
  return g;
}

std::map<std::string, Value> BuildInputs(const ModelConfig& cfg, Value batch) {
  cfg.Validate();
  std::map<std::string, Value> inputs;
  inputs.emplace(std::string(kBatchInput), std::move(batch));
  const std::vector<std::string> names = cfg.WeightNames();
  for (size_t i = 0; i < names.size(); ++i) inputs.emplace(names[i], cfg.weights[i]);
  if (cfg.kind == ModelKind::kGin) inputs.emplace(std::string(kEpsilonInput), Scalar{cfg.eps});
  return inputs;
}

Tensor DenseReference(const ModelConfig& cfg, const SampledBatch& batch) {
  cfg.Validate();
  if (batch.layers.size() != cfg.layers) {
    Throw(Errc::kInvalidArgument, "batch has " + std::to_string(batch.layers.size()) +
                                      " layers, model expects " + std::to_string(cfg.layers));
  }
  if (batch.feature_len != cfg.feature_len) {
    Throw(Errc::kInvalidArgument, "batch feature length differs from the model's");
  }
  // x is [rows x width], row-major, double precision throughout.
  size_t rows = batch.num_sampled();
  size_t width = cfg.feature_len;
  std::vector<double> x(batch.embeddings.begin(), batch.embeddings.end());
  size_t wi = 0;
  for (uint32_t l = 0; l < cfg.layers; ++l) {
    const LayerGraph& layer = batch.layers[l];
    const uint32_t n = layer.num_src;
    if (rows < n) Throw(Errc::kInvalidArgument, "features do not cover layer sources");
    const std::vector<float> adj = LayerToDense(layer, n);
    std::vector<double> h(size_t{layer.num_dst} * width, 0.0);
    for (uint32_t i = 0; i < layer.num_dst; ++i) {
      const double di = layer.deg[i];
      for (uint32_t j = 0; j < n; ++j) {
        if (adj[size_t{i} * n + j] == 0.0f) continue;
        const double dj = layer.deg[j];
        for (size_t f = 0; f < width; ++f) {
          const double xi = x[i * width + f];
          const double xj = x[j * width + f];
          double term = 0.0;
          switch (cfg.kind) {
            case ModelKind::kGcn:
              term = i == j ? xi / di : xj / std::sqrt(dj * di);
              break;
            case ModelKind::kGin:
              term = i == j ? (1.0 + cfg.eps) * xi : xj;
              break;
            case ModelKind::kNgcf:
              term = i == j ? (xi + xi * xi) / di : (xj + xj * xi) / std::sqrt(dj * di);
              break;
          }
          h[i * width + f] += term;
        }
      }
    }
    rows = layer.num_dst;
    for (uint32_t w = 0; w < cfg.WeightsPerLayer(); ++w) {
      const Tensor& wt = cfg.weights[wi++];
      const size_t out_w = wt.cols();
      std::vector<double> y(rows * out_w, 0.0);
      for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < out_w; ++c) {
          double acc = 0.0;
          for (size_t p = 0; p < width; ++p) acc += h[r * width + p] * double{wt.at(p, c)};
          y[r * out_w + c] = std::max(acc, 0.0);
        }
      }
      h = std::move(y);
      width = out_w;
    }
    x = std::move(h);
  }
  std::vector<float> out(x.begin(), x.end());
  return Tensor::Matrix(rows, width, std::move(out));
}

namespace {

constexpr char kWeightMagic[8] = {'H', 'G', 'N', 'N', 'W', 'G', 'T', '\0'};
constexpr uint32_t kWeightVersion = 1;

}  // namespace

std::vector<uint8_t> EncodeWeights(const ModelConfig& cfg) {
  cfg.Validate();
  ByteWriter w;
  w.PutBytes(ByteSpan(reinterpret_cast<const uint8_t*>(kWeightMagic), sizeof(kWeightMagic)));
  w.Put<uint32_t>(kWeightVersion);
  w.Put<uint32_t>(static_cast<uint32_t>(cfg.kind));
  w.Put<uint32_t>(cfg.layers);
  w.Put<uint32_t>(cfg.feature_len);
  w.Put<float>(cfg.eps);
  for (uint32_t h : cfg.hidden) w.Put<uint32_t>(h);
  for (const Tensor& t : cfg.weights) {
    for (float v : t.data()) w.Put<float>(v);
  }
  return w.Take();
}

ModelConfig DecodeWeights(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  const ByteSpan magic = r.GetBytes(sizeof(kWeightMagic));
  if (std::memcmp(magic.data(), kWeightMagic, sizeof(kWeightMagic)) != 0) {
    Throw(Errc::kDataLoss, "not a weight file");
  }
  if (r.Get<uint32_t>() != kWeightVersion) Throw(Errc::kDataLoss, "unsupported weight file version");
  ModelConfig cfg;
  const uint32_t kind = r.Get<uint32_t>();
  if (kind < 1 || kind > 3) Throw(Errc::kDataLoss, "weight file has unknown model kind");
  cfg.kind = static_cast<ModelKind>(kind);
  cfg.layers = r.Get<uint32_t>();
  cfg.feature_len = r.Get<uint32_t>();
  cfg.eps = r.Get<float>();
  if (cfg.layers == 0 || cfg.layers > 64) Throw(Errc::kDataLoss, "weight file layer count implausible");
  for (uint32_t l = 0; l < cfg.layers; ++l) cfg.hidden.push_back(r.Get<uint32_t>());
  for (uint32_t l = 0; l < cfg.layers; ++l) {
    for (uint32_t w = 0; w < cfg.WeightsPerLayer(); ++w) {
      const size_t rows = w == 0 ? cfg.InputWidth(l) : cfg.hidden[l];
      const size_t cols = cfg.hidden[l];
      if (rows * cols * 4 > r.remaining()) Throw(Errc::kDataLoss, "weight file truncated");
      std::vector<float> data(rows * cols);
      for (float& v : data) v = r.Get<float>();
      cfg.weights.push_back(Tensor::Matrix(rows, cols, std::move(data)));
    }
  }
  if (r.remaining() != 0) Throw(Errc::kDataLoss, "weight file has trailing bytes");
  cfg.Validate();
  return cfg;
}

void SaveWeights(const std::string& path, const ModelConfig& cfg) {
  const std::vector<uint8_t> bytes = EncodeWeights(cfg);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) Throw(Errc::kIo, "cannot write weight file " + path);
}

ModelConfig LoadWeights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Throw(Errc::kIo, "cannot open weight file " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return DecodeWeights(bytes);
}

}  // namespace hgnn
