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


// Example loadable kernel plugin. It registers the device "FancyDev" at
// priority 999 with its own GEMM kernel, plus a new operation "MyOp" that
// scales a tensor by two.
//
// Build it as a shared module and load it with `hgnn run --plugin <path>` or
// the PLUGIN service call. The host executable exports the hgnn symbols the
// plugin uses.

#include <utility>
#include <vector>

#include "hgnn/kernels/kernels.h"
#include "hgnn/runner/runner.h"

namespace {

using hgnn::KernelContext;
using hgnn::Tensor;
using hgnn::Value;

std::vector<Value> FancyGemm(KernelContext& ctx, std::span<const Value> args) {
  if (args.size() != 2) hgnn::Throw(hgnn::Errc::kInvalidArgument, "FancyDev GEMM takes two tensors");
  const auto& a = std::get<Tensor>(args[0]);
  const auto& b = std::get<Tensor>(args[1]);
  return {hgnn::Gemm(a, b, ctx.device->ParamsFor(hgnn::Backend::kTile))};
}

std::vector<Value> Double(KernelContext&, std::span<const Value> args) {
  if (args.size() != 1) hgnn::Throw(hgnn::Errc::kInvalidArgument, "MyOp takes one tensor");
  Tensor t = std::get<Tensor>(args[0]);
  for (float& x : t.data()) x *= 2.0f;
  return {std::move(t)};
}

}  // namespace

HGNN_KERNEL_PLUGIN(host) {
  host->RegisterDevice(hgnn::DeviceProfile{"FancyDev", 999, {{"tile", 8}}});
  host->RegisterOpDefinition("GEMM", "FancyDev", FancyGemm);
  host->RegisterOpDefinition("MyOp", "FancyDev", Double);
  return 0;
}
