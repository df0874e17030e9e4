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


#include "hgnn/kernels/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "hgnn/common/error.h"

namespace hgnn {

namespace {

size_t Volume(const std::vector<size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), size_t{1}, std::multiplies<>());
}

}  // namespace

Tensor::Tensor(std::vector<size_t> shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.empty() || shape_.size() > 2) {
    Throw(Errc::kInvalidArgument, "tensor rank must be 1 or 2");
  }
  if (Volume(shape_) != data_.size()) {
    Throw(Errc::kInvalidArgument, "tensor data length " + std::to_string(data_.size()) +
                                      " does not match shape " + ShapeString());
  }
}

Tensor Tensor::Zeros(std::vector<size_t> shape) {
  const size_t n = Volume(shape);
  return Tensor(std::move(shape), std::vector<float>(n, 0.0f));
}

std::string Tensor::ShapeString() const {
  std::string s = "[";
  for (size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

double MaxRelError(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    Throw(Errc::kInvalidArgument, "cannot compare " + a.ShapeString() + " with " + b.ShapeString());
  }
  double diff = 0.0;
  double scale = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::fabs(double{a.data()[i]} - double{b.data()[i]}));
    scale = std::max(scale, std::fabs(double{b.data()[i]}));
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace hgnn
