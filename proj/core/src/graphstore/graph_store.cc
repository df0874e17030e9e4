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

#include "hgnn/graphstore/graph_store.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <exception>
#include <latch>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <utility>

#include "hgnn/graphstore/text_formats.h"

namespace hgnn {

namespace {

constexpr char kMapMagic[8] = {'H', 'G', 'N', 'N', 'M', 'A', 'P', '\0'};
constexpr size_t kHeaderFixedBytes = 8 + 4 * 6 + 8 * 7 + 4;

std::string VidText(Vid v) { return "vertex " + std::to_string(v); }

[[noreturn]] void Corrupt(const std::string& what) { Throw(Errc::kInternal, what); }

// Neighbor pages produced by the conversion activity of bulk ingest.
struct PackedGraph {
  GraphMapping mapping;
  std::vector<std::pair<Lpn, Bytes>> pages;
  Lpn watermark = 0;
  uint64_t edge_count = 0;
};

PackedGraph ConvertEdgeArray(std::string_view edge_text, uint32_t vertex_count,
                             const StoreLayout& layout) {
  const std::vector<Edge> raw = ParseEdgeText(edge_text);
  // Symmetrize, merge and inject self-loops; keys are (dst << 32 | src).
  std::vector<uint64_t> keys;
  keys.reserve(raw.size() * 2 + vertex_count);
  for (const auto& [src, dst] : raw) {
    if (src >= vertex_count || dst >= vertex_count) {
      Throw(Errc::kParse, "edge " + std::to_string(src) + " " + std::to_string(dst) +
                              " references a VID without an embedding row");
    }
    keys.push_back(uint64_t{dst} << 32 | src);
    keys.push_back(uint64_t{src} << 32 | dst);
  }
  for (Vid v = 0; v < vertex_count; ++v) keys.push_back(uint64_t{v} << 32 | v);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  PackedGraph out;
  GraphMapping& m = out.mapping;
  m.gmap.Resize(layout.capacity);
  m.live.Resize(layout.capacity);
  m.next_vid = vertex_count;
  Lpn next = layout.neighbor_begin;
  auto alloc = [&]() {
    if (next >= layout.emb_first_lpn) {
      Throw(Errc::kCapacityExceeded, "neighbor space exhausted during bulk ingest");
    }
    return next++;
  };

  const uint32_t page_size = layout.page_size;
  LtypePage current;
  Lpn current_lpn = 0;
  auto flush_l = [&]() {
    if (current.sets.empty()) return;
    m.l_table.push_back({current.MaxVid(), current_lpn});
    out.pages.emplace_back(current_lpn, current.Encode(page_size));
    current.sets.clear();
  };

  size_t k = 0;
  for (Vid v = 0; v < vertex_count; ++v) {
    std::vector<Vid> nbrs;
    while (k < keys.size() && (keys[k] >> 32) == v) {
      Vid src = static_cast<Vid>(keys[k] & 0xffffffffu);
      if (src > v) ++out.edge_count;
      nbrs.push_back(src);
      ++k;
    }
    m.live.Set(v, true);
    if (LtypePage::SetFitsAlone(nbrs.size(), page_size)) {
      NeighborSet set{v, std::move(nbrs)};
      if (!current.sets.empty() &&
          current.EncodedSize() + set.FootprintInPage() > page_size) {
        flush_l();
      }
      if (current.sets.empty()) current_lpn = alloc();
      current.sets.push_back(std::move(set));
    } else {
      m.gmap.Set(v, true);
      std::vector<Lpn>& chain = m.h_table[v];
      const size_t per_page = HtypePage::Capacity(page_size);
      for (size_t at = 0; at < nbrs.size(); at += per_page) {
        HtypePage hp;
        hp.neighbors.assign(nbrs.begin() + at,
                            nbrs.begin() + std::min(nbrs.size(), at + per_page));
        Lpn lpn = alloc();
        chain.push_back(lpn);
        out.pages.emplace_back(lpn, hp.Encode(page_size));
      }
    }
  }
  flush_l();
  out.watermark = next;
  return out;
}

}  // namespace

GraphStore::GraphStore(SimulatedSsd& device) : device_(device) { Load(); }

GraphStore::~GraphStore() {
  try {
    if (formatted_) Sync();
  } catch (...) {
    // Destructors must not throw; an explicit Sync() reports failures.
  }
}

void GraphStore::RequireFormatted() const {
  if (!formatted_) Throw(Errc::kFailedPrecondition, "graph store is not formatted");
}

void GraphStore::RequireLive(Vid v) const {
  RequireFormatted();
  if (!map_.IsLive(v)) Throw(Errc::kNotFound, VidText(v) + " is not live");
}

bool GraphStore::formatted() const {
  std::shared_lock lock(mu_);
  return formatted_;
}

void GraphStore::ResetInMemory(const StoreLayout& layout) {
  layout_ = layout;
  map_ = GraphMapping{};
  map_.gmap.Resize(layout.capacity);
  map_.live.Resize(layout.capacity);
  free_pages_.clear();
  neighbor_watermark_ = layout.neighbor_begin;
  stats_ = StoreStats{};
  meta_shadow_.assign(layout.meta_pages, Bytes{});
  formatted_ = true;
}

void GraphStore::Format(uint32_t feature_len, uint32_t capacity) {
  std::unique_lock lock(mu_);
  StoreLayout layout = StoreLayout::Compute(device_.page_size(), device_.page_count(),
                                            feature_len, capacity);
  ResetInMemory(layout);
  lock.unlock();
  Sync();
}

IngestReport GraphStore::UpdateGraph(std::string_view edge_text, std::string_view embed_text,
                                     const IngestOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  auto since = [t0]() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };

  const EmbeddingTextShape shape = ScanEmbeddingText(embed_text);
  if (shape.rows == 0 || shape.feature_len == 0) {
    Throw(Errc::kParse, "embedding text has no rows");
  }
  const uint32_t n = shape.rows;
  const auto scaled = static_cast<uint64_t>(std::ceil(1.25 * static_cast<double>(n)));
  const uint64_t capacity = std::max<uint64_t>(scaled, options.min_capacity);
  if (capacity >= kInvalidVid) Throw(Errc::kCapacityExceeded, "too many vertices");
  const StoreLayout layout =
      StoreLayout::Compute(device_.page_size(), device_.page_count(), shape.feature_len,
                           static_cast<uint32_t>(capacity));

  std::unique_lock lock(mu_);
  formatted_ = false;

  IngestReport report;
  report.vertex_count = n;
  std::latch writer_started(1);
  std::exception_ptr embed_error;
  // Embedding streaming: sequential page writes into the embedding space.
  std::thread writer([&]() {
    report.embed_write_start_ns = since();
    writer_started.count_down();
    try {
      const uint32_t page_size = layout.page_size;
      Bytes page(page_size, 0);
      Lpn lpn = layout.emb_first_lpn;
      size_t fill = 0;
      ForEachEmbeddingRow(embed_text, shape.feature_len,
                          [&](uint32_t, std::span<const float> row) {
                            for (float f : row) {
                              StoreLe<float>(page.data() + fill, f);
                              fill += 4;
                              if (fill == page_size) {
                                device_.WritePage(lpn++, page, io_tag::kBulkEmbed);
                                std::fill(page.begin(), page.end(), 0);
                                fill = 0;
                              }
                            }
                          });
      if (fill > 0) device_.WritePage(lpn, page, io_tag::kBulkEmbed);
    } catch (...) {
      embed_error = std::current_exception();
    }
    report.embed_write_end_ns = since();
  });

  // Graph conversion runs while the embeddings stream; its pages are held
  // back and flushed once both activities finish.
  writer_started.wait();
  report.prep_start_ns = since();
  PackedGraph packed;
  std::exception_ptr prep_error;
  try {
    packed = ConvertEdgeArray(edge_text, n, layout);
  } catch (...) {
    prep_error = std::current_exception();
  }
  report.prep_end_ns = since();
  writer.join();
  if (prep_error) std::rethrow_exception(prep_error);
  if (embed_error) std::rethrow_exception(embed_error);

  for (const auto& [lpn, bytes] : packed.pages) device_.WritePage(lpn, bytes, io_tag::kBulkGraph);
  report.edge_count = packed.edge_count;

  ResetInMemory(layout);
  map_ = std::move(packed.mapping);
  neighbor_watermark_ = packed.watermark;
  lock.unlock();
  Sync();
  return report;
}

// ---------------------------------------------------------------------------
// Metadata persistence

void GraphStore::Sync() {
  std::unique_lock lock(mu_);
  if (!formatted_) return;
  const uint32_t page_size = layout_.page_size;
  std::vector<std::pair<Lpn, Bytes>> pages;

  Bytes header(page_size, 0);
  {
    ByteWriter w;
    w.PutBytes(ByteSpan(reinterpret_cast<const uint8_t*>(kMapMagic), sizeof(kMapMagic)));
    w.Put<uint32_t>(kStoreFormatVersion);
    w.Put<uint32_t>(page_size);
    w.Put<uint32_t>(layout_.feature_len);
    w.Put<uint32_t>(layout_.capacity);
    w.Put<uint32_t>(map_.next_vid);
    w.Put<uint32_t>(0);
    w.Put<uint64_t>(layout_.meta_pages);
    w.Put<uint64_t>(layout_.neighbor_begin);
    w.Put<uint64_t>(neighbor_watermark_);
    w.Put<uint64_t>(layout_.emb_first_lpn);
    w.Put<uint64_t>(stats_.update_requests);
    w.Put<uint64_t>(stats_.evictions);
    w.Put<uint64_t>(stats_.promotions);
    w.Put<uint32_t>(static_cast<uint32_t>(layout_.sections.size()));
    for (size_t i = 0; i < layout_.sections.size(); ++i) {
      ByteWriter body;
      SerializeSection(static_cast<MetaSection>(i), map_, free_pages_, body);
      const MetaExtent& ext = layout_.sections[i];
      if (body.size() > ext.page_budget * page_size) {
        Corrupt("metadata section " + std::to_string(i) + " outgrew its slot");
      }
      w.Put<uint64_t>(ext.first_lpn);
      w.Put<uint64_t>(ext.page_budget);
      w.Put<uint64_t>(body.size());
      Bytes& b = body.bytes();
      for (size_t off = 0, p = 0; off < b.size(); off += page_size, ++p) {
        Bytes page(page_size, 0);
        std::copy(b.begin() + static_cast<long>(off),
                  b.begin() + static_cast<long>(std::min(b.size(), off + page_size)),
                  page.begin());
        pages.emplace_back(ext.first_lpn + p, std::move(page));
      }
    }
    if (w.size() > page_size) Corrupt("metadata header exceeds one page");
    std::copy(w.bytes().begin(), w.bytes().end(), header.begin());
  }
  pages.emplace_back(0, std::move(header));

  for (auto& [lpn, bytes] : pages) {
    Bytes& shadow = meta_shadow_[lpn];
    if (shadow == bytes) continue;
    device_.WritePage(lpn, bytes, io_tag::kMetaSync);
    shadow = std::move(bytes);
  }
}

void GraphStore::Load() {
  std::unique_lock lock(mu_);
  formatted_ = false;
  const uint32_t page_size = device_.page_size();
  if (page_size > 65536) return;
  Bytes header = device_.ReadPage(0, io_tag::kMetaLoad);
  if (std::memcmp(header.data(), kMapMagic, sizeof(kMapMagic)) != 0) return;

  ByteReader r(header);
  r.GetBytes(sizeof(kMapMagic));
  const uint32_t version = r.Get<uint32_t>();
  if (version != kStoreFormatVersion) {
    Throw(Errc::kDataLoss, "unsupported graph store version " + std::to_string(version));
  }
  if (r.Get<uint32_t>() != page_size) Throw(Errc::kDataLoss, "graph store page size mismatch");
  const uint32_t feature_len = r.Get<uint32_t>();
  const uint32_t capacity = r.Get<uint32_t>();
  StoreLayout layout =
      StoreLayout::Compute(page_size, device_.page_count(), feature_len, capacity);
  const Vid next_vid = r.Get<uint32_t>();
  r.Get<uint32_t>();
  if (r.Get<uint64_t>() != layout.meta_pages || r.Get<uint64_t>() != layout.neighbor_begin) {
    Throw(Errc::kDataLoss, "graph store layout mismatch");
  }
  const Lpn watermark = r.Get<uint64_t>();
  if (r.Get<uint64_t>() != layout.emb_first_lpn) {
    Throw(Errc::kDataLoss, "embedding region mismatch");
  }
  StoreStats stats;
  stats.update_requests = r.Get<uint64_t>();
  stats.evictions = r.Get<uint64_t>();
  stats.promotions = r.Get<uint64_t>();
  const uint32_t nsections = r.Get<uint32_t>();
  if (nsections != layout.sections.size()) Throw(Errc::kDataLoss, "section count mismatch");

  ResetInMemory(layout);
  meta_shadow_[0] = header;
  std::vector<uint64_t> byte_lens(nsections);
  for (uint32_t i = 0; i < nsections; ++i) {
    const Lpn first = r.Get<uint64_t>();
    const uint64_t budget = r.Get<uint64_t>();
    byte_lens[i] = r.Get<uint64_t>();
    if (first != layout.sections[i].first_lpn || budget != layout.sections[i].page_budget ||
        byte_lens[i] > budget * page_size) {
      Throw(Errc::kDataLoss, "metadata extent mismatch");
    }
  }

  for (uint32_t i = 0; i < nsections; ++i) {
    Bytes body;
    const MetaExtent& ext = layout.sections[i];
    for (Lpn p = 0; p * page_size < byte_lens[i]; ++p) {
      Bytes page = device_.ReadPage(ext.first_lpn + p, io_tag::kMetaLoad);
      body.insert(body.end(), page.begin(), page.end());
      meta_shadow_[ext.first_lpn + p] = std::move(page);
    }
    body.resize(byte_lens[i]);
    ByteReader br(body);
    switch (static_cast<MetaSection>(i)) {
      case MetaSection::kGmap:
        map_.gmap = Bitmap::Deserialize(br);
        break;
      case MetaSection::kLive:
        map_.live = Bitmap::Deserialize(br);
        break;
      case MetaSection::kHtable: {
        const uint32_t count = br.Get<uint32_t>();
        for (uint32_t e = 0; e < count; ++e) {
          Vid v = br.Get<uint32_t>();
          uint32_t len = br.Get<uint32_t>();
          std::vector<Lpn>& chain = map_.h_table[v];
          for (uint32_t j = 0; j < len; ++j) chain.push_back(br.Get<uint64_t>());
        }
        break;
      }
      case MetaSection::kLtable: {
        const uint32_t count = br.Get<uint32_t>();
        for (uint32_t e = 0; e < count; ++e) {
          LtableEntry entry;
          entry.max_vid = br.Get<uint32_t>();
          entry.lpn = br.Get<uint64_t>();
          map_.l_table.push_back(entry);
        }
        break;
      }
      case MetaSection::kFreeVids: {
        const uint32_t count = br.Get<uint32_t>();
        for (uint32_t e = 0; e < count; ++e) map_.free_vids.push_back(br.Get<uint32_t>());
        break;
      }
      case MetaSection::kFreePages: {
        const uint32_t count = br.Get<uint32_t>();
        for (uint32_t e = 0; e < count; ++e) free_pages_.push_back(br.Get<uint64_t>());
        break;
      }
      case MetaSection::kCount:
        break;
    }
  }
  if (map_.gmap.size() != capacity || map_.live.size() != capacity) {
    Throw(Errc::kDataLoss, "bitmap size does not match capacity");
  }
  map_.next_vid = next_vid;
  neighbor_watermark_ = watermark;
  stats_ = stats;
}

// ---------------------------------------------------------------------------
// Page helpers

Lpn GraphStore::AllocPage() {
  if (!free_pages_.empty()) {
    Lpn lpn = free_pages_.back();
    free_pages_.pop_back();
    return lpn;
  }
  if (neighbor_watermark_ >= layout_.emb_first_lpn) {
    Throw(Errc::kCapacityExceeded, "neighbor space exhausted");
  }
  return neighbor_watermark_++;
}

void GraphStore::FreePage(Lpn lpn, std::string_view tag) {
  device_.Trim(lpn, tag);
  free_pages_.push_back(lpn);
}

LtypePage GraphStore::ReadL(Lpn lpn, std::string_view tag) const {
  return LtypePage::Decode(device_.ReadPage(lpn, tag));
}

void GraphStore::WriteL(Lpn lpn, const LtypePage& page, std::string_view tag) {
  device_.WritePage(lpn, page.Encode(layout_.page_size), tag);
}

HtypePage GraphStore::ReadH(Lpn lpn, std::string_view tag) const {
  return HtypePage::Decode(device_.ReadPage(lpn, tag));
}

void GraphStore::WriteH(Lpn lpn, const HtypePage& page, std::string_view tag) {
  device_.WritePage(lpn, page.Encode(layout_.page_size), tag);
}

void GraphStore::StoreLPage(size_t idx, LtypePage& page, std::string_view tag) {
  const uint32_t page_size = layout_.page_size;
  while (!page.Fits(page_size)) {
    if (page.sets.size() < 2) Corrupt("L-type page cannot hold a single set");
    // Evict the set at the most significant offset to a fresh page.
    NeighborSet evicted = std::move(page.sets.back());
    page.sets.pop_back();
    const Lpn fresh = AllocPage();
    LtypePage moved;
    const Vid evicted_vid = evicted.src;
    moved.sets.push_back(std::move(evicted));
    WriteL(fresh, moved, tag);
    map_.l_table[idx].max_vid = page.MaxVid();
    map_.l_table.insert(map_.l_table.begin() + static_cast<long>(idx) + 1,
                        LtableEntry{evicted_vid, fresh});
    ++stats_.evictions;
  }
  map_.l_table[idx].max_vid = page.MaxVid();
  WriteL(map_.l_table[idx].lpn, page, tag);
  device_.NoteRmw(tag);
}

void GraphStore::RemoveLSet(Vid v, std::string_view tag) {
  const size_t idx = map_.LowerBound(v);
  if (idx == map_.l_table.size()) Corrupt(VidText(v) + " has no L-type entry");
  const Lpn lpn = map_.l_table[idx].lpn;
  LtypePage page = ReadL(lpn, tag);
  const long at = page.Find(v);
  if (at < 0) Corrupt(VidText(v) + " missing from its L-type page");
  page.sets.erase(page.sets.begin() + at);
  if (page.sets.empty()) {
    map_.l_table.erase(map_.l_table.begin() + static_cast<long>(idx));
    FreePage(lpn, tag);
    return;
  }
  map_.l_table[idx].max_vid = page.MaxVid();
  WriteL(lpn, page, tag);
  device_.NoteRmw(tag);
}

void GraphStore::AppendLSet(NeighborSet set, std::string_view tag) {
  const Vid v = set.src;
  auto fresh_page = [&]() {
    const Lpn lpn = AllocPage();
    LtypePage page;
    page.sets.push_back(std::move(set));
    WriteL(lpn, page, tag);
    return lpn;
  };
  if (map_.l_table.empty()) {
    map_.l_table.push_back({v, fresh_page()});
    return;
  }
  const size_t idx = map_.LowerBound(v);
  if (idx == map_.l_table.size()) {
    // Beyond every range: try the last page, else open a new entry.
    LtableEntry& last = map_.l_table.back();
    LtypePage page = ReadL(last.lpn, tag);
    if (page.EncodedSize() + set.FootprintInPage() <= layout_.page_size) {
      page.sets.push_back(std::move(set));
      last.max_vid = v;
      WriteL(last.lpn, page, tag);
      device_.NoteRmw(tag);
    } else {
      map_.l_table.push_back({v, fresh_page()});
    }
    return;
  }
  LtypePage page = ReadL(map_.l_table[idx].lpn, tag);
  auto pos = std::lower_bound(page.sets.begin(), page.sets.end(), v,
                              [](const NeighborSet& s, Vid x) { return s.src < x; });
  page.sets.insert(pos, std::move(set));
  StoreLPage(idx, page, tag);
}

void GraphStore::WriteHChain(Vid v, const std::vector<Vid>& neighbors, std::string_view tag) {
  std::vector<Lpn>& chain = map_.h_table[v];
  const size_t per_page = HtypePage::Capacity(layout_.page_size);
  for (size_t at = 0; at < neighbors.size(); at += per_page) {
    HtypePage hp;
    hp.neighbors.assign(neighbors.begin() + static_cast<long>(at),
                        neighbors.begin() + static_cast<long>(std::min(neighbors.size(), at + per_page)));
    const Lpn lpn = AllocPage();
    WriteH(lpn, hp, tag);
    chain.push_back(lpn);
  }
}

// ---------------------------------------------------------------------------
// Queries

std::vector<Vid> GraphStore::NeighborsLocked(Vid v, std::string_view tag) const {
  RequireLive(v);
  std::vector<Vid> out;
  if (map_.IsH(v)) {
    auto it = map_.h_table.find(v);
    if (it == map_.h_table.end()) Corrupt(VidText(v) + " is H-type without a chain");
    for (Lpn lpn : it->second) {
      HtypePage page = ReadH(lpn, tag);
      out.insert(out.end(), page.neighbors.begin(), page.neighbors.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  const size_t idx = map_.LowerBound(v);
  if (idx == map_.l_table.size()) Corrupt(VidText(v) + " has no L-type entry");
  LtypePage page = ReadL(map_.l_table[idx].lpn, tag);
  const long at = page.Find(v);
  if (at < 0) Corrupt(VidText(v) + " missing from its L-type page");
  return std::move(page.sets[static_cast<size_t>(at)].neighbors);
}

std::vector<Vid> GraphStore::GetNeighbors(Vid v, std::string_view tag) const {
  std::shared_lock lock(mu_);
  return NeighborsLocked(v, tag);
}

void GraphStore::ReadRecordLocked(Vid v, MutableByteSpan out, std::string_view tag) const {
  const uint32_t page_size = layout_.page_size;
  uint64_t addr = uint64_t{v} * layout_.record_size();
  size_t done = 0;
  Bytes page(page_size);
  while (done < out.size()) {
    const Lpn lpn = layout_.emb_first_lpn + addr / page_size;
    const size_t off = addr % page_size;
    const size_t chunk = std::min<size_t>(page_size - off, out.size() - done);
    device_.ReadPage(lpn, page, tag);
    std::memcpy(out.data() + done, page.data() + off, chunk);
    done += chunk;
    addr += chunk;
  }
}

void GraphStore::WriteRecordLocked(Vid v, ByteSpan record, std::string_view tag) {
  const uint32_t page_size = layout_.page_size;
  uint64_t addr = uint64_t{v} * layout_.record_size();
  size_t done = 0;
  Bytes page(page_size);
  while (done < record.size()) {
    const Lpn lpn = layout_.emb_first_lpn + addr / page_size;
    const size_t off = addr % page_size;
    const size_t chunk = std::min<size_t>(page_size - off, record.size() - done);
    if (chunk == page_size) {
      device_.WritePage(lpn, record.subspan(done, chunk), tag);
    } else {
      device_.ReadPage(lpn, page, tag);
      std::memcpy(page.data() + off, record.data() + done, chunk);
      device_.WritePage(lpn, page, tag);
      device_.NoteRmw(tag);
    }
    done += chunk;
    addr += chunk;
  }
}

std::vector<float> GraphStore::GetEmbed(Vid v, std::string_view tag) const {
  std::shared_lock lock(mu_);
  RequireLive(v);
  Bytes raw(layout_.record_size());
  ReadRecordLocked(v, raw, tag);
  std::vector<float> out(layout_.feature_len);
  for (size_t i = 0; i < out.size(); ++i) out[i] = LoadLe<float>(raw.data() + 4 * i);
  return out;
}

// ---------------------------------------------------------------------------
// Unit updates

namespace {

Bytes EncodeRecord(std::span<const float> embed) {
  Bytes raw(embed.size() * 4);
  for (size_t i = 0; i < embed.size(); ++i) StoreLe<float>(raw.data() + 4 * i, embed[i]);
  return raw;
}

}  // namespace

void GraphStore::AddVertex(Vid v, std::span<const float> embed) {
  std::unique_lock lock(mu_);
  RequireFormatted();
  if (v >= layout_.capacity) {
    Throw(Errc::kCapacityExceeded, VidText(v) + " beyond capacity " +
                                       std::to_string(layout_.capacity));
  }
  if (map_.IsLive(v)) Throw(Errc::kAlreadyExists, VidText(v) + " is already live");
  if (embed.size() != layout_.feature_len) {
    Throw(Errc::kInvalidArgument, "embedding has " + std::to_string(embed.size()) +
                                      " floats, expected " +
                                      std::to_string(layout_.feature_len));
  }
  ++stats_.update_requests;
  // A new vertex has only its self-loop, so it always starts L-type.
  AppendLSet(NeighborSet{v, {v}}, io_tag::kAddVertex);
  WriteRecordLocked(v, EncodeRecord(embed), io_tag::kAddVertex);
  map_.live.Set(v, true);
  map_.gmap.Set(v, false);
  std::erase(map_.free_vids, v);
  map_.next_vid = std::max<Vid>(map_.next_vid, v + 1);
}

Vid GraphStore::AllocVid() {
  std::unique_lock lock(mu_);
  RequireFormatted();
  if (!map_.free_vids.empty()) {
    Vid v = map_.free_vids.back();
    map_.free_vids.pop_back();
    return v;
  }
  if (map_.next_vid >= layout_.capacity) {
    Throw(Errc::kCapacityExceeded, "VID space exhausted (capacity " +
                                       std::to_string(layout_.capacity) + ")");
  }
  return map_.next_vid++;
}

bool GraphStore::AddDirected(Vid x, Vid nb, std::string_view tag) {
  if (map_.IsH(x)) {
    std::vector<Lpn>& chain = map_.h_table.at(x);
    HtypePage last;
    for (size_t i = 0; i < chain.size(); ++i) {
      HtypePage page = ReadH(chain[i], tag);
      if (std::binary_search(page.neighbors.begin(), page.neighbors.end(), nb)) return false;
      if (i + 1 == chain.size()) last = std::move(page);
    }
    if (last.neighbors.size() < HtypePage::Capacity(layout_.page_size)) {
      last.neighbors.insert(std::upper_bound(last.neighbors.begin(), last.neighbors.end(), nb),
                            nb);
      WriteH(chain.back(), last, tag);
      device_.NoteRmw(tag);
    } else {
      HtypePage fresh;
      fresh.neighbors.push_back(nb);
      const Lpn lpn = AllocPage();
      WriteH(lpn, fresh, tag);
      chain.push_back(lpn);
    }
    return true;
  }

  const size_t idx = map_.LowerBound(x);
  if (idx == map_.l_table.size()) Corrupt(VidText(x) + " has no L-type entry");
  LtypePage page = ReadL(map_.l_table[idx].lpn, tag);
  const long at = page.Find(x);
  if (at < 0) Corrupt(VidText(x) + " missing from its L-type page");
  std::vector<Vid>& set = page.sets[static_cast<size_t>(at)].neighbors;
  auto pos = std::lower_bound(set.begin(), set.end(), nb);
  if (pos != set.end() && *pos == nb) return false;
  set.insert(pos, nb);

  if (!LtypePage::SetFitsAlone(set.size(), layout_.page_size)) {
    // Promote: the set no longer fits any L-type page.
    std::vector<Vid> neighbors = std::move(set);
    page.sets.erase(page.sets.begin() + at);
    const Lpn lpn = map_.l_table[idx].lpn;
    if (page.sets.empty()) {
      map_.l_table.erase(map_.l_table.begin() + static_cast<long>(idx));
      FreePage(lpn, tag);
    } else {
      map_.l_table[idx].max_vid = page.MaxVid();
      WriteL(lpn, page, tag);
      device_.NoteRmw(tag);
    }
    WriteHChain(x, neighbors, tag);
    map_.gmap.Set(x, true);
    ++stats_.promotions;
    return true;
  }
  StoreLPage(idx, page, tag);
  return true;
}

bool GraphStore::RemoveDirected(Vid x, Vid nb, std::string_view tag) {
  if (map_.IsH(x)) {
    for (Lpn lpn : map_.h_table.at(x)) {
      HtypePage page = ReadH(lpn, tag);
      auto pos = std::lower_bound(page.neighbors.begin(), page.neighbors.end(), nb);
      if (pos == page.neighbors.end() || *pos != nb) continue;
      // Emptied pages stay linked; there is no compaction.
      page.neighbors.erase(pos);
      WriteH(lpn, page, tag);
      device_.NoteRmw(tag);
      return true;
    }
    return false;
  }
  const size_t idx = map_.LowerBound(x);
  if (idx == map_.l_table.size()) Corrupt(VidText(x) + " has no L-type entry");
  const Lpn lpn = map_.l_table[idx].lpn;
  LtypePage page = ReadL(lpn, tag);
  const long at = page.Find(x);
  if (at < 0) Corrupt(VidText(x) + " missing from its L-type page");
  std::vector<Vid>& set = page.sets[static_cast<size_t>(at)].neighbors;
  auto pos = std::lower_bound(set.begin(), set.end(), nb);
  if (pos == set.end() || *pos != nb) return false;
  set.erase(pos);
  WriteL(lpn, page, tag);
  device_.NoteRmw(tag);
  return true;
}

void GraphStore::AddEdge(Vid dst, Vid src) {
  std::unique_lock lock(mu_);
  RequireLive(dst);
  RequireLive(src);
  ++stats_.update_requests;
  if (dst == src) return;  // self-loop is always present
  AddDirected(dst, src, io_tag::kAddEdge);
  AddDirected(src, dst, io_tag::kAddEdge);
}

void GraphStore::DeleteEdge(Vid dst, Vid src) {
  std::unique_lock lock(mu_);
  RequireLive(dst);
  RequireLive(src);
  if (dst == src) Throw(Errc::kInvalidArgument, "self-loops cannot be deleted");
  ++stats_.update_requests;
  RemoveDirected(dst, src, io_tag::kDeleteEdge);
  RemoveDirected(src, dst, io_tag::kDeleteEdge);
}

void GraphStore::DeleteVertex(Vid v) {
  std::unique_lock lock(mu_);
  RequireLive(v);
  ++stats_.update_requests;
  const std::string_view tag = io_tag::kDeleteVertex;
  for (Vid u : NeighborsLocked(v, tag)) {
    if (u != v) RemoveDirected(u, v, tag);
  }
  if (map_.IsH(v)) {
    for (Lpn lpn : map_.h_table.at(v)) FreePage(lpn, tag);
    map_.h_table.erase(v);
  } else {
    RemoveLSet(v, tag);
  }
  map_.live.Set(v, false);
  map_.gmap.Set(v, false);
  map_.free_vids.push_back(v);
}

void GraphStore::UpdateEmbed(Vid v, std::span<const float> embed) {
  std::unique_lock lock(mu_);
  RequireLive(v);
  if (embed.size() != layout_.feature_len) {
    Throw(Errc::kInvalidArgument, "embedding has " + std::to_string(embed.size()) +
                                      " floats, expected " +
                                      std::to_string(layout_.feature_len));
  }
  ++stats_.update_requests;
  WriteRecordLocked(v, EncodeRecord(embed), io_tag::kUpdateEmbed);
}

// ---------------------------------------------------------------------------
// Introspection

bool GraphStore::IsLive(Vid v) const {
  std::shared_lock lock(mu_);
  return formatted_ && map_.IsLive(v);
}

std::vector<Vid> GraphStore::LiveVertices() const {
  std::shared_lock lock(mu_);
  std::vector<Vid> out;
  for (size_t v = 0; v < map_.live.size(); ++v) {
    if (map_.live.Get(v)) out.push_back(static_cast<Vid>(v));
  }
  return out;
}

uint32_t GraphStore::feature_len() const {
  std::shared_lock lock(mu_);
  RequireFormatted();
  return layout_.feature_len;
}

uint32_t GraphStore::capacity() const {
  std::shared_lock lock(mu_);
  RequireFormatted();
  return layout_.capacity;
}

Vid GraphStore::next_vid() const {
  std::shared_lock lock(mu_);
  return map_.next_vid;
}

StoreStats GraphStore::stats() const {
  std::shared_lock lock(mu_);
  return stats_;
}

EmbeddingRegion GraphStore::embedding_region() const {
  std::shared_lock lock(mu_);
  RequireFormatted();
  return EmbeddingRegion{layout_.feature_len, layout_.record_size(), layout_.capacity,
                         layout_.emb_first_lpn};
}

StoreLayout GraphStore::layout() const {
  std::shared_lock lock(mu_);
  RequireFormatted();
  return layout_;
}

GraphMapping GraphStore::MappingSnapshot() const {
  std::shared_lock lock(mu_);
  return map_;
}

VertexLocation GraphStore::Locate(Vid v) const {
  std::shared_lock lock(mu_);
  RequireLive(v);
  VertexLocation loc;
  if (map_.IsH(v)) {
    loc.type = VertexType::kH;
    loc.lpns = map_.h_table.at(v);
    return loc;
  }
  loc.type = VertexType::kL;
  loc.l_index = map_.LowerBound(v);
  if (loc.l_index == map_.l_table.size()) Corrupt(VidText(v) + " has no L-type entry");
  loc.lpns.push_back(map_.l_table[loc.l_index].lpn);
  return loc;
}

void GraphStore::CheckInvariants() const {
  std::shared_lock lock(mu_);
  RequireFormatted();
  const uint32_t page_size = layout_.page_size;
  std::map<Vid, std::vector<Vid>> adjacency;
  std::set<Lpn> used_pages;
  auto claim = [&](Lpn lpn) {
    if (lpn < layout_.neighbor_begin || lpn >= layout_.emb_first_lpn) {
      Corrupt("page " + std::to_string(lpn) + " outside the neighbor space");
    }
    if (!used_pages.insert(lpn).second) Corrupt("page " + std::to_string(lpn) + " reused");
  };

  Vid prev_max = 0;
  for (size_t i = 0; i < map_.l_table.size(); ++i) {
    const LtableEntry& e = map_.l_table[i];
    if (i > 0 && e.max_vid <= prev_max) Corrupt("l_table not strictly ascending");
    claim(e.lpn);
    LtypePage page = ReadL(e.lpn, "check");
    if (page.sets.empty()) Corrupt("empty L-type page kept in l_table");
    if (page.MaxVid() != e.max_vid) Corrupt("l_table max_vid does not match its page");
    for (const NeighborSet& s : page.sets) {
      if (i > 0 && s.src <= prev_max) Corrupt(VidText(s.src) + " outside its page range");
      if (!map_.IsLive(s.src) || map_.IsH(s.src)) {
        Corrupt(VidText(s.src) + " stored in an L-type page but not live L-type");
      }
      if (!LtypePage::SetFitsAlone(s.neighbors.size(), page_size)) {
        Corrupt(VidText(s.src) + " is L-type but oversize");
      }
      if (!adjacency.emplace(s.src, s.neighbors).second) {
        Corrupt(VidText(s.src) + " stored twice");
      }
    }
    prev_max = e.max_vid;
  }
  for (const auto& [v, chain] : map_.h_table) {
    if (!map_.IsLive(v) || !map_.IsH(v)) Corrupt(VidText(v) + " in h_table but not live H-type");
    if (chain.empty()) Corrupt(VidText(v) + " has an empty chain");
    std::vector<Vid> all;
    for (Lpn lpn : chain) {
      claim(lpn);
      HtypePage page = ReadH(lpn, "check");
      all.insert(all.end(), page.neighbors.begin(), page.neighbors.end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
      Corrupt(VidText(v) + " has a duplicated neighbor");
    }
    adjacency.emplace(v, std::move(all));
  }
  for (Lpn lpn : free_pages_) {
    if (used_pages.count(lpn)) Corrupt("free page " + std::to_string(lpn) + " is in use");
  }
  for (Vid v : map_.free_vids) {
    if (map_.IsLive(v)) Corrupt(VidText(v) + " is both free and live");
  }
  size_t live_count = 0;
  for (size_t v = 0; v < map_.live.size(); ++v) {
    if (!map_.live.Get(v)) continue;
    ++live_count;
    auto it = adjacency.find(static_cast<Vid>(v));
    if (it == adjacency.end()) Corrupt(VidText(static_cast<Vid>(v)) + " is live but unmapped");
    const std::vector<Vid>& nbrs = it->second;
    if (!std::binary_search(nbrs.begin(), nbrs.end(), static_cast<Vid>(v))) {
      Corrupt(VidText(static_cast<Vid>(v)) + " lacks its self-loop");
    }
    for (Vid u : nbrs) {
      auto back = adjacency.find(u);
      if (back == adjacency.end() ||
          !std::binary_search(back->second.begin(), back->second.end(), static_cast<Vid>(v))) {
        Corrupt("edge " + std::to_string(v) + "->" + std::to_string(u) + " is not mirrored");
      }
    }
  }
  if (live_count != adjacency.size()) Corrupt("mapped vertex count differs from live count");
}

}  // namespace hgnn
