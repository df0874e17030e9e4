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

// A page-granular block device backed by an image file. It has no FTL and
// no timing model: the I/O counters are the evaluation surface.
//
// Image layout: a 64-byte header followed by page_count pages.
//   [0..8)   magic "HGNNSSD\0"
//   [8..12)  version (u32, currently 1)
//   [12..16) page_size (u32)
//   [16..24) page_count (u64)
//   [24..64) reserved, zero
// All integers are little-endian.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "hgnn/common/le_bytes.h"

namespace hgnn {

using Lpn = uint64_t;

struct DeviceGeometry {
  uint32_t page_size = 4096;
  uint64_t page_count = 0;
  std::filesystem::path image_path;

  // Throws kInvalidArgument when page_size is not a power of two >= 512 or
  // page_count < 16.
  void Validate() const;
};

struct IoCounterSet {
  uint64_t pages_read = 0;
  uint64_t pages_written = 0;
  uint64_t pages_trimmed = 0;
  uint64_t rmw_count = 0;

  IoCounterSet& operator+=(const IoCounterSet& o);
  friend bool operator==(const IoCounterSet&, const IoCounterSet&) = default;
};

IoCounterSet operator-(const IoCounterSet& a, const IoCounterSet& b);

struct IoCounters {
  IoCounterSet total;
  std::map<std::string, IoCounterSet, std::less<>> by_tag;

  IoCounterSet Tag(std::string_view tag) const;
  friend bool operator==(const IoCounters&, const IoCounters&) = default;
};

// Per-tag difference; tags whose difference is all zero are omitted.
IoCounters operator-(const IoCounters& a, const IoCounters& b);

inline constexpr uint32_t kSsdImageVersion = 1;
inline constexpr size_t kSsdHeaderSize = 64;

class SimulatedSsd {
 public:
  // Creates (or truncates) the image and zero-fills every page.
  static std::unique_ptr<SimulatedSsd> Create(const DeviceGeometry& geometry);
  // Opens an existing image, validating its header.
  static std::unique_ptr<SimulatedSsd> Open(const std::filesystem::path& path);

  ~SimulatedSsd();
  SimulatedSsd(const SimulatedSsd&) = delete;
  SimulatedSsd& operator=(const SimulatedSsd&) = delete;

  uint32_t page_size() const { return geometry_.page_size; }
  uint64_t page_count() const { return geometry_.page_count; }
  const DeviceGeometry& geometry() const { return geometry_; }

  Bytes ReadPage(Lpn lpn, std::string_view tag);
  void ReadPage(Lpn lpn, MutableByteSpan out, std::string_view tag);
  void WritePage(Lpn lpn, ByteSpan data, std::string_view tag);
  void Trim(Lpn lpn, std::string_view tag = "trim");

  // Callers perform read-modify-write themselves and declare each cycle here.
  void NoteRmw(std::string_view tag);

  IoCounters SnapshotCounters() const;
  void ResetCounters();

 private:
  SimulatedSsd(DeviceGeometry geometry, int fd);

  void CheckLpn(Lpn lpn) const;
  void Count(std::string_view tag, IoCounterSet delta);

  DeviceGeometry geometry_;
  int fd_ = -1;
  // Readers share, writers and trims are exclusive.
  mutable std::shared_mutex io_mu_;
  mutable std::mutex counters_mu_;
  IoCounters counters_;
};

}  // namespace hgnn
