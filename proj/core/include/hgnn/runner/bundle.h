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


// Backend-profile bundles stand in for accelerator bitfiles:
//
//   device "Vector processor" priority 150 params{lanes=8}
//   bind "GEMM" -> "Vector processor":"gemm.lane"
//
// Blank lines and '#' comments are ignored; params{...} may be omitted.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hgnn/kernels/kernels.h"

namespace hgnn {

struct KernelBinding {
  std::string op;
  std::string device;
  std::string kernel_id;
  friend bool operator==(const KernelBinding&, const KernelBinding&) = default;
};

struct ProfileBundle {
  std::vector<DeviceProfile> devices;
  std::vector<KernelBinding> bindings;
  friend bool operator==(const ProfileBundle&, const ProfileBundle&) = default;
};

// Throws kParse with a 1-based line number. Bindings must target devices
// declared earlier in the same bundle.
ProfileBundle ParseBundle(std::string_view text);
std::string FormatBundle(const ProfileBundle& bundle);

// Built-in operation names paired with their kernel family; kernel ids are
// "<family>.<scalar|lane|tile>".
const std::vector<std::pair<std::string, std::string>>& BuiltinOperations();

// The vector and systolic user-logic devices with lane and tile kernels for
// every built-in operation.
std::string_view Table3Bundle();

}  // namespace hgnn
