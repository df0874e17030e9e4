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

#include "hgnn/graphstore/page_codec.h"

#include <algorithm>
#include <string>

namespace hgnn {

namespace {

void CheckSorted(const std::vector<Vid>& v, const char* what) {
  if (!std::is_sorted(v.begin(), v.end())) {
    Throw(Errc::kInvalidArgument, std::string(what) + ": neighbors must be ascending");
  }
}

}  // namespace

Bytes HtypePage::Encode(uint32_t page_size) const {
  if (neighbors.size() > Capacity(page_size)) {
    Throw(Errc::kInvalidArgument, "H-type page overflow: " + std::to_string(neighbors.size()) +
                                      " neighbors, capacity " +
                                      std::to_string(Capacity(page_size)));
  }
  CheckSorted(neighbors, "H-type page");
  Bytes page(page_size, 0);
  StoreLe<uint32_t>(page.data(), static_cast<uint32_t>(neighbors.size()));
  for (size_t i = 0; i < neighbors.size(); ++i) {
    StoreLe<uint32_t>(page.data() + 4 + 4 * i, neighbors[i]);
  }
  return page;
}

HtypePage HtypePage::Decode(ByteSpan page) {
  if (page.size() < 8) Throw(Errc::kDataLoss, "H-type page too small");
  uint32_t count = LoadLe<uint32_t>(page.data());
  if (count > Capacity(static_cast<uint32_t>(page.size()))) {
    Throw(Errc::kDataLoss, "H-type page count " + std::to_string(count) + " exceeds capacity");
  }
  HtypePage out;
  out.neighbors.resize(count);
  for (uint32_t i = 0; i < count; ++i) {
    out.neighbors[i] = LoadLe<uint32_t>(page.data() + 4 + 4 * size_t{i});
  }
  if (!std::is_sorted(out.neighbors.begin(), out.neighbors.end())) {
    Throw(Errc::kDataLoss, "H-type page neighbors out of order");
  }
  return out;
}

size_t LtypePage::EncodedSize() const {
  size_t total = 4;
  for (const auto& s : sets) total += s.FootprintInPage();
  return total;
}

long LtypePage::Find(Vid src) const {
  auto it = std::lower_bound(sets.begin(), sets.end(), src,
                             [](const NeighborSet& s, Vid v) { return s.src < v; });
  if (it == sets.end() || it->src != src) return -1;
  return static_cast<long>(it - sets.begin());
}

Bytes LtypePage::Encode(uint32_t page_size) const {
  if (page_size > 65536) Throw(Errc::kInvalidArgument, "L-type pages need page_size <= 64KiB");
  if (!Fits(page_size)) {
    Throw(Errc::kInvalidArgument, "L-type page overflow: " + std::to_string(EncodedSize()) +
                                      " bytes > " + std::to_string(page_size));
  }
  Bytes page(page_size, 0);
  const size_t n = sets.size();
  StoreLe<uint32_t>(page.data() + page_size - 4, static_cast<uint32_t>(n));
  const size_t meta_start = page_size - 4 - 8 * n;
  size_t cursor = 0;
  for (size_t i = 0; i < n; ++i) {
    const NeighborSet& s = sets[i];
    if (i > 0 && sets[i - 1].src >= s.src) {
      Throw(Errc::kInvalidArgument, "L-type page sets must be strictly ascending by src");
    }
    CheckSorted(s.neighbors, "L-type set");
    StoreLe<uint32_t>(page.data() + cursor, static_cast<uint32_t>(s.neighbors.size()));
    for (size_t j = 0; j < s.neighbors.size(); ++j) {
      StoreLe<uint32_t>(page.data() + cursor + 4 + 4 * j, s.neighbors[j]);
    }
    uint8_t* meta = page.data() + meta_start + 8 * i;
    StoreLe<uint32_t>(meta, s.src);
    StoreLe<uint16_t>(meta + 4, static_cast<uint16_t>(cursor));
    StoreLe<uint16_t>(meta + 6, 0);
    cursor += 4 + 4 * s.neighbors.size();
  }
  return page;
}

LtypePage LtypePage::Decode(ByteSpan page) {
  const size_t page_size = page.size();
  if (page_size < 16 || page_size > 65536) Throw(Errc::kDataLoss, "bad L-type page size");
  const uint32_t n = LoadLe<uint32_t>(page.data() + page_size - 4);
  if (size_t{n} * 8 + 4 > page_size) {
    Throw(Errc::kDataLoss, "L-type set_count " + std::to_string(n) + " exceeds page");
  }
  const size_t meta_start = page_size - 4 - 8 * size_t{n};
  LtypePage out;
  out.sets.resize(n);
  size_t prev_end = 0;
  for (uint32_t i = 0; i < n; ++i) {
    const uint8_t* meta = page.data() + meta_start + 8 * size_t{i};
    NeighborSet& s = out.sets[i];
    s.src = LoadLe<uint32_t>(meta);
    const size_t offset = LoadLe<uint16_t>(meta + 4);
    if (i > 0 && out.sets[i - 1].src >= s.src) {
      Throw(Errc::kDataLoss, "L-type meta entries out of order");
    }
    if (offset < prev_end || offset + 4 > meta_start) {
      Throw(Errc::kDataLoss, "L-type set offset " + std::to_string(offset) + " invalid");
    }
    const uint32_t degree = LoadLe<uint32_t>(page.data() + offset);
    const size_t end = offset + 4 + 4 * size_t{degree};
    if (end > meta_start) Throw(Errc::kDataLoss, "L-type set overruns meta region");
    s.neighbors.resize(degree);
    for (uint32_t j = 0; j < degree; ++j) {
      s.neighbors[j] = LoadLe<uint32_t>(page.data() + offset + 4 + 4 * size_t{j});
    }
    if (!std::is_sorted(s.neighbors.begin(), s.neighbors.end())) {
      Throw(Errc::kDataLoss, "L-type set neighbors out of order");
    }
    prev_end = end;
  }
  return out;
}

}  // namespace hgnn
