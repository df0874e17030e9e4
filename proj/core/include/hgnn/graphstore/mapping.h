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

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "hgnn/blockdev/simulated_ssd.h"
#include "hgnn/graphstore/page_codec.h"

namespace hgnn {

class Bitmap {
 public:
  Bitmap() = default;
  explicit Bitmap(size_t nbits) { Resize(nbits); }

  void Resize(size_t nbits) {
    nbits_ = nbits;
    words_.assign((nbits + 63) / 64, 0);
  }
  size_t size() const { return nbits_; }
  bool Get(size_t i) const { return i < nbits_ && ((words_[i / 64] >> (i % 64)) & 1u); }
  void Set(size_t i, bool on) {
    if (on) {
      words_[i / 64] |= uint64_t{1} << (i % 64);
    } else {
      words_[i / 64] &= ~(uint64_t{1} << (i % 64));
    }
  }
  size_t Count() const;

  void Serialize(ByteWriter& w) const;
  static Bitmap Deserialize(ByteReader& r);

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  size_t nbits_ = 0;
  std::vector<uint64_t> words_;
};

struct LtableEntry {
  Vid max_vid = kInvalidVid;
  Lpn lpn = 0;
  friend bool operator==(const LtableEntry&, const LtableEntry&) = default;
};

// VID -> LPN metadata. gmap bit 1 selects the H-type table, 0 the L-type one.
struct GraphMapping {
  Bitmap gmap;
  Bitmap live;
  std::map<Vid, std::vector<Lpn>> h_table;
  std::vector<LtableEntry> l_table;  // strictly ascending max_vid
  std::vector<Vid> free_vids;        // LIFO
  Vid next_vid = 0;

  // Index of the entry with the least max_vid >= v, or l_table.size().
  size_t LowerBound(Vid v) const;

  bool IsH(Vid v) const { return gmap.Get(v); }
  bool IsLive(Vid v) const { return live.Get(v); }

  friend bool operator==(const GraphMapping&, const GraphMapping&) = default;
};

// Where the metadata sections live. Each section owns a fixed, page-aligned
// slot sized for its worst case, so rewriting one never shifts another.
enum class MetaSection : uint32_t {
  kGmap = 0,
  kLive,
  kHtable,
  kLtable,
  kFreeVids,
  kFreePages,
  kCount,
};

struct MetaExtent {
  Lpn first_lpn = 0;
  uint64_t page_budget = 0;
};

struct StoreLayout {
  uint32_t page_size = 0;
  uint32_t feature_len = 0;
  uint32_t capacity = 0;
  uint64_t meta_pages = 0;
  Lpn neighbor_begin = 0;
  Lpn emb_first_lpn = 0;
  std::array<MetaExtent, static_cast<size_t>(MetaSection::kCount)> sections{};

  uint64_t record_size() const { return uint64_t{feature_len} * 4; }

  // Throws kCapacityExceeded when the device cannot hold the metadata, at
  // least one neighbor page and `capacity` embedding records.
  static StoreLayout Compute(uint32_t page_size, uint64_t page_count, uint32_t feature_len,
                             uint32_t capacity);
};

void SerializeSection(MetaSection section, const GraphMapping& m,
                      const std::vector<Lpn>& free_pages, ByteWriter& w);

}  // namespace hgnn
