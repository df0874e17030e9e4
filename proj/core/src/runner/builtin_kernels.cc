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


#include <chrono>
#include <string>
#include <utility>

#include "hgnn/common/error.h"
#include "hgnn/runner/runner.h"

namespace hgnn {

const char* ValueKindName(const Value& v) {
  switch (v.index()) {
    case 0:
      return "Tensor";
    case 1:
      return "SampledBatch";
    case 2:
      return "BatchRequest";
    case 3:
      return "Scalar";
  }
  return "unknown";
}

namespace {

template <typename T>
const T& Arg(std::span<const Value> args, size_t i, const char* kernel) {
  if (i >= args.size()) {
    Throw(Errc::kInvalidArgument, std::string(kernel) + " expects argument " + std::to_string(i));
  }
  const T* p = std::get_if<T>(&args[i]);
  if (p == nullptr) {
    Throw(Errc::kInvalidArgument, std::string(kernel) + " argument " + std::to_string(i) +
                                      " has kind " + ValueKindName(args[i]));
  }
  return *p;
}

void RequireArity(std::span<const Value> args, size_t lo, size_t hi, const char* kernel) {
  if (args.size() < lo || args.size() > hi) {
    Throw(Errc::kInvalidArgument, std::string(kernel) + " takes " + std::to_string(lo) +
                                      (lo == hi ? "" : ".." + std::to_string(hi)) +
                                      " arguments, got " + std::to_string(args.size()));
  }
}

BackendParams ParamsOf(const KernelContext& ctx, Backend kind) {
  return ctx.device ? ctx.device->ParamsFor(kind) : BackendParams{kind};
}

KernelFn BatchPreKernel() {
  return [](KernelContext& ctx, std::span<const Value> args) -> std::vector<Value> {
    RequireArity(args, 1, 1, "BatchPre");
    if (const auto* ready = std::get_if<SampledBatch>(&args[0])) return {*ready};
    const BatchRequest& req = Arg<BatchRequest>(args, 0, "BatchPre");
    if (ctx.store == nullptr) Throw(Errc::kFailedPrecondition, "BatchPre needs a graph store");
    SampledBatch batch = SampleBatch(*ctx.store, req);
    ctx.batch_io_pages += batch.io_pages;
    return {std::move(batch)};
  };
}

KernelFn SpmmKernel(SpmmMode mode, Backend kind) {
  return [mode, kind](KernelContext& ctx, std::span<const Value> args) -> std::vector<Value> {
    RequireArity(args, 1, 3, "SpMM");
    const SampledBatch& batch = Arg<SampledBatch>(args, 0, "SpMM");
    if (batch.layers.empty()) Throw(Errc::kInvalidArgument, "SpMM: batch has no layers left");
    const Tensor* features = nullptr;
    float eps = 0.0f;
    for (size_t i = 1; i < args.size(); ++i) {
      if (const auto* t = std::get_if<Tensor>(&args[i])) {
        features = t;
      } else if (const auto* s = std::get_if<Scalar>(&args[i])) {
        eps = static_cast<float>(s->value);
      } else {
        Throw(Errc::kInvalidArgument, std::string("SpMM: unexpected ") + ValueKindName(args[i]));
      }
    }
    Tensor embedded;
    if (features == nullptr) {
      embedded = Tensor::Matrix(batch.num_sampled(), batch.feature_len, batch.embeddings);
      features = &embedded;
    }
    Tensor out = Spmm(mode, batch.layers.front(), *features, eps, ParamsOf(ctx, kind));
    SampledBatch rest = batch;
    rest.layers.erase(rest.layers.begin());
    return {std::move(out), std::move(rest)};
  };
}

KernelFn GemmKernel(Backend kind) {
  return [kind](KernelContext& ctx, std::span<const Value> args) -> std::vector<Value> {
    RequireArity(args, 2, 2, "GEMM");
    return {Gemm(Arg<Tensor>(args, 0, "GEMM"), Arg<Tensor>(args, 1, "GEMM"), ParamsOf(ctx, kind))};
  };
}

KernelFn EwKernel(EwOp op, Backend kind) {
  return [op, kind](KernelContext& ctx, std::span<const Value> args) -> std::vector<Value> {
    if (op == EwOp::kIdentity) {
      RequireArity(args, 1, 1, "Identity");
      return {args[0]};
    }
    const bool binary = op == EwOp::kAdd || op == EwOp::kMul;
    RequireArity(args, binary ? 2 : 1, binary ? 2 : 1, "ElementWise");
    const Tensor& a = Arg<Tensor>(args, 0, "ElementWise");
    const Tensor* b = binary ? &Arg<Tensor>(args, 1, "ElementWise") : nullptr;
    return {Elementwise(op, a, b, ParamsOf(ctx, kind))};
  };
}

KernelFn ReduceKernel(ReduceOp op, Backend kind) {
  return [op, kind](KernelContext& ctx, std::span<const Value> args) -> std::vector<Value> {
    RequireArity(args, 1, 2, "Reduce");
    size_t axis = 0;
    if (args.size() == 2) {
      const double a = Arg<Scalar>(args, 1, "Reduce").value;
      if (a < 0 || a != static_cast<double>(static_cast<size_t>(a))) {
        Throw(Errc::kInvalidArgument, "Reduce axis must be a non-negative integer");
      }
      axis = static_cast<size_t>(a);
    }
    return {Reduce(op, Arg<Tensor>(args, 0, "Reduce"), axis, ParamsOf(ctx, kind))};
  };
}

KernelFn SddmmKernel(Backend kind) {
  return [kind](KernelContext& ctx, std::span<const Value> args) -> std::vector<Value> {
    RequireArity(args, 3, 3, "SDDMM");
    const SampledBatch& batch = Arg<SampledBatch>(args, 0, "SDDMM");
    if (batch.layers.empty()) Throw(Errc::kInvalidArgument, "SDDMM: batch has no layers left");
    std::vector<float> values = Sddmm(batch.layers.front(), Arg<Tensor>(args, 1, "SDDMM"),
                                      Arg<Tensor>(args, 2, "SDDMM"), ParamsOf(ctx, kind));
    const size_t n = values.size();
    return {Tensor({n}, std::move(values))};
  };
}

struct Family {
  const char* prefix;
  bool batch_prep;
};

constexpr Family kFamilies[] = {
    {"batchpre", true},   {"gemm", false},        {"spmm_mean", false},  {"spmm_sum", false},
    {"spmm_ngcf", false}, {"relu", false},        {"add", false},        {"mul", false},
    {"identity", false},  {"reduce_sum", false},  {"reduce_mean", false}, {"reduce_max", false},
    {"sddmm", false},
};

constexpr std::pair<Backend, const char*> kBackends[] = {
    {Backend::kScalar, "scalar"}, {Backend::kLane, "lane"}, {Backend::kTile, "tile"}};

KernelFn Make(std::string_view family, Backend kind) {
  if (family == "gemm") return GemmKernel(kind);
  if (family == "spmm_mean") return SpmmKernel(SpmmMode::kGcnMean, kind);
  if (family == "spmm_sum") return SpmmKernel(SpmmMode::kGinSum, kind);
  if (family == "spmm_ngcf") return SpmmKernel(SpmmMode::kNgcf, kind);
  if (family == "relu") return EwKernel(EwOp::kRelu, kind);
  if (family == "add") return EwKernel(EwOp::kAdd, kind);
  if (family == "mul") return EwKernel(EwOp::kMul, kind);
  if (family == "identity") return EwKernel(EwOp::kIdentity, kind);
  if (family == "reduce_sum") return ReduceKernel(ReduceOp::kSum, kind);
  if (family == "reduce_mean") return ReduceKernel(ReduceOp::kMean, kind);
  if (family == "reduce_max") return ReduceKernel(ReduceOp::kMax, kind);
  if (family == "sddmm") return SddmmKernel(kind);
  return nullptr;
}

}  // namespace

std::vector<std::string> BuiltinKernelIds() {
  std::vector<std::string> ids;
  for (const Family& f : kFamilies) {
    if (f.batch_prep) {
      ids.push_back(std::string(f.prefix) + ".scalar");
      continue;
    }
    for (const auto& [kind, name] : kBackends) ids.push_back(std::string(f.prefix) + "." + name);
  }
  return ids;
}

KernelFn BuiltinKernel(std::string_view kernel_id) {
  const size_t dot = kernel_id.rfind('.');
  if (dot != std::string_view::npos) {
    const std::string_view family = kernel_id.substr(0, dot);
    const std::string_view backend = kernel_id.substr(dot + 1);
    if (family == "batchpre" && backend == "scalar") return BatchPreKernel();
    for (const auto& [kind, name] : kBackends) {
      if (backend != name) continue;
      if (KernelFn fn = Make(family, kind)) return fn;
    }
  }
  Throw(Errc::kInvalidArgument, "unknown built-in kernel \"" + std::string(kernel_id) + "\"");
}

}  // namespace hgnn
