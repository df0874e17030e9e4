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

// Neighbor-space page layouts.
//
// H-type page (one vertex's neighbors, possibly one link of a chain):
//   [0..4)            count (u32)
//   [4..4+4*count)    neighbor VIDs (u32), ascending
//   rest              zero
//
// L-type page (several low-degree vertices packed together):
//   from byte 0 up:   neighbor sets {degree u32, degree x u32 VIDs ascending}
//   tail, growing down:
//     [P-4..P)        set_count (u32)
//     [P-4-8*n..P-4)  set_count meta entries {src_vid u32, offset u16, reserved u16}
//                     ordered ascending by src_vid
// Sets are laid out in src_vid order, so offsets increase with src_vid and the
// set with the most significant offset is the page's largest VID.

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "hgnn/common/le_bytes.h"

namespace hgnn {

using Vid = uint32_t;
inline constexpr Vid kInvalidVid = std::numeric_limits<Vid>::max();

struct HtypePage {
  std::vector<Vid> neighbors;

  static size_t Capacity(uint32_t page_size) { return (page_size - 4) / 4; }

  Bytes Encode(uint32_t page_size) const;
  static HtypePage Decode(ByteSpan page);

  friend bool operator==(const HtypePage&, const HtypePage&) = default;
};

struct NeighborSet {
  Vid src = kInvalidVid;
  std::vector<Vid> neighbors;

  // Bytes this set occupies in an L-type page, meta entry included.
  size_t FootprintInPage() const { return 4 + 4 * neighbors.size() + 8; }

  friend bool operator==(const NeighborSet&, const NeighborSet&) = default;
};

struct LtypePage {
  // Ordered ascending by src.
  std::vector<NeighborSet> sets;

  size_t EncodedSize() const;
  bool Fits(uint32_t page_size) const { return EncodedSize() <= page_size; }
  // Whether a single set of `degree` neighbors can live in an L-type page.
  static bool SetFitsAlone(size_t degree, uint32_t page_size) {
    return 4 + 4 * degree + 8 + 4 <= page_size;
  }

  // Returns the index of the set for `src`, or -1.
  long Find(Vid src) const;
  Vid MaxVid() const { return sets.empty() ? kInvalidVid : sets.back().src; }

  Bytes Encode(uint32_t page_size) const;
  static LtypePage Decode(ByteSpan page);

  friend bool operator==(const LtypePage&, const LtypePage&) = default;
};

}  // namespace hgnn
