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


#include "hgnn/kernels/kernels.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hgnn/common/error.h"

namespace hgnn {

void DeviceProfile::Validate() const {
  if (name.empty()) Throw(Errc::kInvalidArgument, "device name must be non-empty");
  for (const auto& [key, value] : params) {
    if (value <= 0) {
      Throw(Errc::kInvalidArgument, "device \"" + name + "\" parameter " + key + " must be positive");
    }
  }
}

BackendParams DeviceProfile::ParamsFor(Backend kind) const {
  BackendParams p;
  p.kind = kind;
  if (auto it = params.find("lanes"); it != params.end()) p.lanes = static_cast<uint32_t>(it->second);
  if (auto it = params.find("tile"); it != params.end()) p.tile = static_cast<uint32_t>(it->second);
  return p;
}

const char* BackendName(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kLane:
      return "lane";
    case Backend::kTile:
      return "tile";
  }
  return "unknown";
}

namespace {

void RequireMatrix(const Tensor& t, const char* what) {
  if (t.rank() != 2) Throw(Errc::kInvalidArgument, std::string(what) + " must be a matrix");
}

void GemmScalar(const Tensor& a, const Tensor& b, Tensor& c) {
  const size_t m = a.rows(), k = a.cols(), n = b.cols();
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) {
      float acc = 0.0f;
      for (size_t p = 0; p < k; ++p) acc += a.at(i, p) * b.at(p, j);
      c.at(i, j) = acc;
    }
  }
}

void GemmLane(const Tensor& a, const Tensor& b, Tensor& c, uint32_t lanes) {
  const size_t m = a.rows(), k = a.cols(), n = b.cols();
  std::vector<float> acc(lanes);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j0 = 0; j0 < n; j0 += lanes) {
      const size_t width = std::min<size_t>(lanes, n - j0);
      std::fill(acc.begin(), acc.end(), 0.0f);
      for (size_t p = 0; p < k; ++p) {
        const float av = a.at(i, p);
        for (size_t l = 0; l < width; ++l) acc[l] += av * b.at(p, j0 + l);
      }
      for (size_t l = 0; l < width; ++l) c.at(i, j0 + l) = acc[l];
    }
  }
}

// Output-stationary array of tile x tile PEs. At step t, PE(r, q) consumes
// the operand pair with reduction index t - r - q, which is when the skewed
// row and column streams meet at that PE.
void GemmTile(const Tensor& a, const Tensor& b, Tensor& c, uint32_t tile) {
  const size_t m = a.rows(), k = a.cols(), n = b.cols();
  std::vector<float> acc(size_t{tile} * tile);
  for (size_t i0 = 0; i0 < m; i0 += tile) {
    const size_t th = std::min<size_t>(tile, m - i0);
    for (size_t j0 = 0; j0 < n; j0 += tile) {
      const size_t tw = std::min<size_t>(tile, n - j0);
      std::fill(acc.begin(), acc.end(), 0.0f);
      const size_t steps = k + th + tw;
      for (size_t t = 0; t < steps; ++t) {
        for (size_t r = 0; r < th; ++r) {
          for (size_t q = 0; q < tw; ++q) {
            if (t < r + q || t - r - q >= k) continue;
            const size_t p = t - r - q;
            acc[r * tile + q] += a.at(i0 + r, p) * b.at(p, j0 + q);
          }
        }
      }
      for (size_t r = 0; r < th; ++r) {
        for (size_t q = 0; q < tw; ++q) c.at(i0 + r, j0 + q) = acc[r * tile + q];
      }
    }
  }
}

uint32_t Positive(uint32_t v, const char* what) {
  if (v == 0) Throw(Errc::kInvalidArgument, std::string(what) + " must be positive");
  return v;
}

}  // namespace

Tensor Gemm(const Tensor& a, const Tensor& b, const BackendParams& backend) {
  RequireMatrix(a, "GEMM lhs");
  RequireMatrix(b, "GEMM rhs");
  if (a.cols() != b.rows()) {
    Throw(Errc::kInvalidArgument,
          "GEMM inner extents differ: " + a.ShapeString() + " x " + b.ShapeString());
  }
  Tensor c = Tensor::Zeros({a.rows(), b.cols()});
  switch (backend.kind) {
    case Backend::kScalar:
      GemmScalar(a, b, c);
      break;
    case Backend::kLane:
      GemmLane(a, b, c, Positive(backend.lanes, "lanes"));
      break;
    case Backend::kTile:
      GemmTile(a, b, c, Positive(backend.tile, "tile"));
      break;
  }
  return c;
}

Tensor Elementwise(EwOp op, const Tensor& a, const Tensor* b, const BackendParams& backend) {
  const bool binary = op == EwOp::kAdd || op == EwOp::kMul;
  if (binary) {
    if (b == nullptr) Throw(Errc::kInvalidArgument, "binary elementwise op needs two operands");
    if (a.shape() != b->shape()) {
      Throw(Errc::kInvalidArgument,
            "elementwise shapes differ: " + a.ShapeString() + " vs " + b->ShapeString());
    }
  }
  Tensor out = a;
  std::vector<float>& o = out.data();
  const size_t n = o.size();
  const size_t block = backend.kind == Backend::kScalar ? 1
                       : backend.kind == Backend::kLane ? Positive(backend.lanes, "lanes")
                                                        : Positive(backend.tile, "tile");
  for (size_t base = 0; base < n; base += block) {
    const size_t end = std::min(n, base + block);
    for (size_t i = base; i < end; ++i) {
      switch (op) {
        case EwOp::kAdd:
          o[i] = a.data()[i] + b->data()[i];
          break;
        case EwOp::kMul:
          o[i] = a.data()[i] * b->data()[i];
          break;
        case EwOp::kRelu:
          o[i] = std::max(a.data()[i], 0.0f);
          break;
        case EwOp::kIdentity:
          break;
      }
    }
  }
  return out;
}

Tensor Reduce(ReduceOp op, const Tensor& a, size_t axis, const BackendParams&) {
  if (axis >= a.rank()) {
    Throw(Errc::kInvalidArgument, "reduce axis " + std::to_string(axis) + " out of range for " +
                                      a.ShapeString());
  }
  const size_t rows = a.rows(), cols = a.cols();
  // A rank-1 tensor reduces along its only axis, like axis 1 of a single row.
  const bool along_rows = a.rank() == 2 && axis == 0;
  const size_t outer = along_rows ? cols : rows;
  const size_t inner = along_rows ? rows : cols;
  std::vector<float> out(outer);
  for (size_t o = 0; o < outer; ++o) {
    float acc = op == ReduceOp::kMax ? -std::numeric_limits<float>::infinity() : 0.0f;
    for (size_t i = 0; i < inner; ++i) {
      const float v = along_rows ? a.at(i, o) : a.at(o, i);
      acc = op == ReduceOp::kMax ? std::max(acc, v) : acc + v;
    }
    if (op == ReduceOp::kMean && inner > 0) acc /= static_cast<float>(inner);
    out[o] = acc;
  }
  return Tensor({outer}, std::move(out));
}

namespace {

void RequireLayerInput(const LayerGraph& layer, const Tensor& x, const char* what) {
  layer.Validate();
  RequireMatrix(x, what);
  if (x.rows() < layer.num_src) {
    Throw(Errc::kInvalidArgument, std::string(what) + " has " + std::to_string(x.rows()) +
                                      " rows, layer needs " + std::to_string(layer.num_src));
  }
}

// Accumulates the contribution of edge src -> dst into `acc` (width F).
void AccumulateEdge(SpmmMode mode, const LayerGraph& layer, const Tensor& x, float eps, uint32_t dst,
                    uint32_t src, size_t f0, size_t f1, float* acc) {
  const auto xi = x.row(dst);
  const auto xj = x.row(src);
  const float di = static_cast<float>(layer.deg[dst]);
  const float dj = static_cast<float>(layer.deg[src]);
  switch (mode) {
    case SpmmMode::kGcnMean: {
      const float w = src == dst ? 1.0f / di : 1.0f / std::sqrt(dj * di);
      for (size_t f = f0; f < f1; ++f) acc[f - f0] += xj[f] * w;
      break;
    }
    case SpmmMode::kGinSum: {
      const float w = src == dst ? 1.0f + eps : 1.0f;
      for (size_t f = f0; f < f1; ++f) acc[f - f0] += xj[f] * w;
      break;
    }
    case SpmmMode::kNgcf: {
      const float w = src == dst ? 1.0f / di : 1.0f / std::sqrt(dj * di);
      for (size_t f = f0; f < f1; ++f) acc[f - f0] += (xj[f] + xj[f] * xi[f]) * w;
      break;
    }
  }
}

}  // namespace

Tensor Spmm(SpmmMode mode, const LayerGraph& layer, const Tensor& x, float eps,
            const BackendParams& backend) {
  RequireLayerInput(layer, x, "SpMM features");
  const size_t width = x.cols();
  Tensor out = Tensor::Zeros({layer.num_dst, width});
  auto row_range = [&](uint32_t i, size_t f0, size_t f1) {
    float* acc = out.row(i).data() + f0;
    for (uint32_t e = layer.row_ptr[i]; e < layer.row_ptr[i + 1]; ++e) {
      AccumulateEdge(mode, layer, x, eps, i, layer.col_idx[e], f0, f1, acc);
    }
  };
  switch (backend.kind) {
    case Backend::kScalar:
      for (uint32_t i = 0; i < layer.num_dst; ++i) row_range(i, 0, width);
      break;
    case Backend::kLane: {
      const size_t lanes = Positive(backend.lanes, "lanes");
      for (uint32_t i = 0; i < layer.num_dst; ++i) {
        for (size_t f0 = 0; f0 < width; f0 += lanes) row_range(i, f0, std::min(width, f0 + lanes));
      }
      break;
    }
    case Backend::kTile: {
      const uint32_t tile = Positive(backend.tile, "tile");
      for (uint32_t i0 = 0; i0 < layer.num_dst; i0 += tile) {
        const uint32_t i1 = std::min(layer.num_dst, i0 + tile);
        for (size_t f0 = 0; f0 < width; f0 += tile) {
          const size_t f1 = std::min(width, f0 + tile);
          for (uint32_t i = i0; i < i1; ++i) row_range(i, f0, f1);
        }
      }
      break;
    }
  }
  return out;
}

std::vector<float> Sddmm(const LayerGraph& layer, const Tensor& a, const Tensor& b,
                         const BackendParams& backend) {
  layer.Validate();
  RequireMatrix(a, "SDDMM lhs");
  RequireMatrix(b, "SDDMM rhs");
  if (a.cols() != b.cols()) {
    Throw(Errc::kInvalidArgument,
          "SDDMM feature widths differ: " + a.ShapeString() + " vs " + b.ShapeString());
  }
  if (a.rows() < layer.num_dst || b.rows() < layer.num_src) {
    Throw(Errc::kInvalidArgument, "SDDMM operands do not cover the layer");
  }
  const size_t width = a.cols();
  const size_t block = backend.kind == Backend::kScalar ? width
                       : backend.kind == Backend::kLane ? Positive(backend.lanes, "lanes")
                                                        : Positive(backend.tile, "tile");
  std::vector<float> out(layer.num_edges(), 0.0f);
  for (uint32_t i = 0; i < layer.num_dst; ++i) {
    const auto ai = a.row(i);
    for (uint32_t e = layer.row_ptr[i]; e < layer.row_ptr[i + 1]; ++e) {
      const auto bj = b.row(layer.col_idx[e]);
      float acc = 0.0f;
      for (size_t f0 = 0; f0 < width; f0 += std::max<size_t>(block, 1)) {
        const size_t f1 = std::min(width, f0 + std::max<size_t>(block, 1));
        for (size_t f = f0; f < f1; ++f) acc += ai[f] * bj[f];
      }
      out[e] = acc;
    }
  }
  return out;
}

}  // namespace hgnn
