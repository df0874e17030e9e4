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

#include "hgnn/graphstore/mapping.h"

#include <algorithm>
#include <bit>
#include <string>

namespace hgnn {

size_t Bitmap::Count() const {
  size_t n = 0;
  for (uint64_t w : words_) n += static_cast<size_t>(std::popcount(w));
  return n;
}

void Bitmap::Serialize(ByteWriter& w) const {
  w.Put<uint64_t>(nbits_);
  for (uint64_t word : words_) w.Put<uint64_t>(word);
}

Bitmap Bitmap::Deserialize(ByteReader& r) {
  Bitmap b;
  uint64_t nbits = r.Get<uint64_t>();
  if (nbits > (uint64_t{1} << 33)) Throw(Errc::kDataLoss, "bitmap size implausible");
  b.Resize(static_cast<size_t>(nbits));
  for (auto& word : b.words_) word = r.Get<uint64_t>();
  return b;
}

size_t GraphMapping::LowerBound(Vid v) const {
  auto it = std::lower_bound(l_table.begin(), l_table.end(), v,
                             [](const LtableEntry& e, Vid x) { return e.max_vid < x; });
  return static_cast<size_t>(it - l_table.begin());
}

namespace {

uint64_t CeilDiv(uint64_t a, uint64_t b) { return (a + b - 1) / b; }

uint64_t SectionBudgetBytes(MetaSection s, uint64_t page_count, uint64_t capacity) {
  switch (s) {
    case MetaSection::kGmap:
    case MetaSection::kLive:
      return 8 + 8 * CeilDiv(capacity, 64);
    case MetaSection::kHtable:
      // count, then {vid, n, n x lpn} per entry
      return 4 + 8 * capacity + 8 * page_count;
    case MetaSection::kLtable:
      return 4 + 12 * page_count;
    case MetaSection::kFreeVids:
      return 4 + 4 * capacity;
    case MetaSection::kFreePages:
      return 4 + 8 * page_count;
    case MetaSection::kCount:
      break;
  }
  return 0;
}

}  // namespace

StoreLayout StoreLayout::Compute(uint32_t page_size, uint64_t page_count, uint32_t feature_len,
                                 uint32_t capacity) {
  if (page_size > 65536) {
    Throw(Errc::kInvalidArgument, "graph store requires page_size <= 64KiB");
  }
  if (feature_len == 0) Throw(Errc::kInvalidArgument, "feature_len must be >= 1");
  if (capacity == 0) Throw(Errc::kInvalidArgument, "capacity must be >= 1");
  if (capacity >= kInvalidVid) Throw(Errc::kInvalidArgument, "capacity exceeds VID space");
  StoreLayout layout;
  layout.page_size = page_size;
  layout.feature_len = feature_len;
  layout.capacity = capacity;
  Lpn next = 1;  // page 0 is the header
  for (size_t i = 0; i < layout.sections.size(); ++i) {
    uint64_t bytes = SectionBudgetBytes(static_cast<MetaSection>(i), page_count, capacity);
    layout.sections[i].first_lpn = next;
    layout.sections[i].page_budget = CeilDiv(bytes, page_size);
    next += layout.sections[i].page_budget;
  }
  layout.meta_pages = next;
  layout.neighbor_begin = next;
  const uint64_t region_pages = CeilDiv(uint64_t{capacity} * layout.record_size(), page_size);
  if (region_pages + layout.meta_pages + 1 > page_count) {
    Throw(Errc::kCapacityExceeded,
          "device too small: " + std::to_string(layout.meta_pages) + " metadata pages + " +
              std::to_string(region_pages) + " embedding pages exceed " +
              std::to_string(page_count) + " pages");
  }
  layout.emb_first_lpn = page_count - region_pages;
  return layout;
}

void SerializeSection(MetaSection section, const GraphMapping& m,
                      const std::vector<Lpn>& free_pages, ByteWriter& w) {
  switch (section) {
    case MetaSection::kGmap:
      m.gmap.Serialize(w);
      break;
    case MetaSection::kLive:
      m.live.Serialize(w);
      break;
    case MetaSection::kHtable:
      w.Put<uint32_t>(static_cast<uint32_t>(m.h_table.size()));
      for (const auto& [vid, lpns] : m.h_table) {
        w.Put<uint32_t>(vid);
        w.Put<uint32_t>(static_cast<uint32_t>(lpns.size()));
        for (Lpn l : lpns) w.Put<uint64_t>(l);
      }
      break;
    case MetaSection::kLtable:
      w.Put<uint32_t>(static_cast<uint32_t>(m.l_table.size()));
      for (const auto& e : m.l_table) {
        w.Put<uint32_t>(e.max_vid);
        w.Put<uint64_t>(e.lpn);
      }
      break;
    case MetaSection::kFreeVids:
      w.Put<uint32_t>(static_cast<uint32_t>(m.free_vids.size()));
      for (Vid v : m.free_vids) w.Put<uint32_t>(v);
      break;
    case MetaSection::kFreePages:
      w.Put<uint32_t>(static_cast<uint32_t>(free_pages.size()));
      for (Lpn l : free_pages) w.Put<uint64_t>(l);
      break;
    case MetaSection::kCount:
      break;
  }
}

}  // namespace hgnn
