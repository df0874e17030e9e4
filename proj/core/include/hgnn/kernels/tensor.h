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


#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hgnn {

// Row-major float32 tensor of rank 1 or 2.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<size_t> shape, std::vector<float> data);
  static Tensor Zeros(std::vector<size_t> shape);
  static Tensor Matrix(size_t rows, size_t cols, std::vector<float> data) {
    return Tensor({rows, cols}, std::move(data));
  }

  const std::vector<size_t>& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t size() const { return data_.size(); }
  // Rank-1 tensors are treated as a single row.
  size_t rows() const { return rank() == 2 ? shape_[0] : 1; }
  size_t cols() const { return rank() == 0 ? 0 : shape_.back(); }

  float& at(size_t r, size_t c) { return data_[r * cols() + c]; }
  float at(size_t r, size_t c) const { return data_[r * cols() + c]; }
  std::span<float> row(size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const float> row(size_t r) const { return {data_.data() + r * cols(), cols()}; }
  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  std::string ShapeString() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<size_t> shape_;
  std::vector<float> data_;
};

// max|a - b| / max|b|; the absolute difference when b is all zeros.
double MaxRelError(const Tensor& a, const Tensor& b);

}  // namespace hgnn
