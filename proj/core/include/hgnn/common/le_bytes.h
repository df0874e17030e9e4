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

// Little-endian load/store helpers shared by every on-disk and on-wire
// encoding in the project.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "hgnn/common/error.h"

namespace hgnn {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;
using MutableByteSpan = std::span<uint8_t>;

template <typename T>
inline T LoadLe(const uint8_t* p) {
  static_assert(std::is_trivially_copyable_v<T>);
  T v;
  std::memcpy(&v, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    auto* b = reinterpret_cast<uint8_t*>(&v);
    for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  }
  return v;
}

template <typename T>
inline void StoreLe(uint8_t* p, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    auto* b = reinterpret_cast<uint8_t*>(&v);
    for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  }
  std::memcpy(p, &v, sizeof(T));
}

// Append-only little-endian encoder.
class ByteWriter {
 public:
  ByteWriter() = default;
  explicit ByteWriter(Bytes initial) : buf_(std::move(initial)) {}

  template <typename T>
  void Put(T v) {
    size_t at = buf_.size();
    buf_.resize(at + sizeof(T));
    StoreLe<T>(buf_.data() + at, v);
  }
  void PutBytes(ByteSpan data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
  void PutString(std::string_view s) {
    buf_.insert(buf_.end(), s.begin(), s.end());
  }

  size_t size() const { return buf_.size(); }
  Bytes& bytes() { return buf_; }
  Bytes Take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

// Bounds-checked little-endian decoder; overruns raise kDataLoss.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  template <typename T>
  T Get() {
    Require(sizeof(T));
    T v = LoadLe<T>(data_.data() + pos_);
    pos_ += sizeof(T);
    return v;
  }
  ByteSpan GetBytes(size_t n) {
    Require(n);
    ByteSpan s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::string GetString(size_t n) {
    ByteSpan s = GetBytes(n);
    return std::string(s.begin(), s.end());
  }

  size_t remaining() const { return data_.size() - pos_; }
  size_t position() const { return pos_; }

 private:
  void Require(size_t n) const {
    if (data_.size() - pos_ < n) {
      Throw(Errc::kDataLoss, "truncated buffer: need " + std::to_string(n) +
                                 " bytes at offset " + std::to_string(pos_));
    }
  }

  ByteSpan data_;
  size_t pos_ = 0;
};

}  // namespace hgnn
