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


#include "hgnn/rpc/protocol.h"

#include <algorithm>
#include <cstring>

namespace hgnn::rpc {

const char* OpcodeName(Opcode op) {
  switch (op) {
    case Opcode::kUpdateGraph:
      return "UPDATE_GRAPH";
    case Opcode::kAddVertex:
      return "ADD_VERTEX";
    case Opcode::kDeleteVertex:
      return "DELETE_VERTEX";
    case Opcode::kAddEdge:
      return "ADD_EDGE";
    case Opcode::kDeleteEdge:
      return "DELETE_EDGE";
    case Opcode::kUpdateEmbed:
      return "UPDATE_EMBED";
    case Opcode::kGetEmbed:
      return "GET_EMBED";
    case Opcode::kGetNeighbors:
      return "GET_NEIGHBORS";
    case Opcode::kRun:
      return "RUN";
    case Opcode::kPlugin:
      return "PLUGIN";
    case Opcode::kProgram:
      return "PROGRAM";
    case Opcode::kStats:
      return "STATS";
  }
  return "UNKNOWN";
}

bool IsKnownOpcode(uint8_t op) { return op >= 1 && op <= 12; }

bool IsMutating(Opcode op) {
  switch (op) {
    case Opcode::kGetEmbed:
    case Opcode::kGetNeighbors:
    case Opcode::kRun:
    case Opcode::kStats:
      return false;
    default:
      return true;
  }
}

Bytes EncodeFrame(const Frame& frame) {
  if (frame.payload.size() > kMaxPayload) Throw(Errc::kInvalidArgument, "payload too large");
  ByteWriter w;
  w.PutBytes(kMagic);
  w.Put<uint8_t>(frame.version);
  w.Put<uint8_t>(frame.opcode);
  w.Put<uint32_t>(frame.request_id);
  w.Put<uint32_t>(static_cast<uint32_t>(frame.payload.size()));
  w.PutBytes(frame.payload);
  return w.Take();
}

FrameHeader DecodeFrameHeader(ByteSpan header) {
  if (header.size() < kHeaderSize) Throw(Errc::kDataLoss, "short frame header");
  if (std::memcmp(header.data(), kMagic, sizeof(kMagic)) != 0) Throw(Errc::kDataLoss, "bad frame magic");
  ByteReader r(header.subspan(sizeof(kMagic)));
  FrameHeader h;
  h.version = r.Get<uint8_t>();
  h.opcode = r.Get<uint8_t>();
  h.request_id = r.Get<uint32_t>();
  h.payload_len = r.Get<uint32_t>();
  if (h.payload_len > kMaxPayload) Throw(Errc::kDataLoss, "frame payload too large");
  return h;
}

Frame DecodeFrame(ByteSpan bytes) {
  const FrameHeader h = DecodeFrameHeader(bytes);
  if (bytes.size() != kHeaderSize + h.payload_len) {
    Throw(Errc::kDataLoss, "frame length " + std::to_string(bytes.size()) + " does not match header");
  }
  Frame f;
  f.version = h.version;
  f.opcode = h.opcode;
  f.request_id = h.request_id;
  f.payload.assign(bytes.begin() + kHeaderSize, bytes.end());
  return f;
}

bool IsTimingTag(uint8_t tag) {
  return tag == static_cast<uint8_t>(Tag::kTiming) || tag == static_cast<uint8_t>(Tag::kBreakdown);
}

// ---------------------------------------------------------------------------
// Payload

Bytes Payload::Encode() const {
  ByteWriter w;
  w.Put<uint32_t>(static_cast<uint32_t>(records_.size()));
  for (const Record& r : records_) {
    w.Put<uint8_t>(r.tag);
    w.Put<uint32_t>(static_cast<uint32_t>(r.data.size()));
    w.PutBytes(r.data);
  }
  return w.Take();
}

Payload Payload::Decode(ByteSpan bytes) {
  ByteReader r(bytes);
  const uint32_t count = r.Get<uint32_t>();
  // Each record needs at least five bytes.
  if (count > r.remaining() / 5) Throw(Errc::kDataLoss, "record count exceeds payload");
  Payload p;
  p.records_.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    Record rec;
    rec.tag = r.Get<uint8_t>();
    const uint32_t len = r.Get<uint32_t>();
    const ByteSpan data = r.GetBytes(len);
    rec.data.assign(data.begin(), data.end());
    p.records_.push_back(std::move(rec));
  }
  if (r.remaining() != 0) Throw(Errc::kDataLoss, "trailing bytes after payload records");
  return p;
}

Payload& Payload::Add(Tag tag, Bytes data) {
  records_.push_back({static_cast<uint8_t>(tag), std::move(data)});
  return *this;
}

Payload& Payload::AddU32(Tag tag, uint32_t v) {
  ByteWriter w;
  w.Put<uint32_t>(v);
  return Add(tag, w.Take());
}

Payload& Payload::AddText(Tag tag, std::string_view text) {
  return Add(tag, Bytes(text.begin(), text.end()));
}

Payload& Payload::AddFloats(Tag tag, std::span<const float> values) {
  ByteWriter w;
  for (float f : values) w.Put<float>(f);
  return Add(tag, w.Take());
}

Payload& Payload::AddVids(Tag tag, std::span<const Vid> vids) {
  ByteWriter w;
  for (Vid v : vids) w.Put<uint32_t>(v);
  return Add(tag, w.Take());
}

const Record* Payload::Find(Tag tag) const {
  for (const Record& r : records_) {
    if (r.tag == static_cast<uint8_t>(tag)) return &r;
  }
  return nullptr;
}

const Record& Payload::Require(Tag tag) const {
  const Record* r = Find(tag);
  if (r == nullptr) {
    Throw(Errc::kInvalidArgument, "request lacks record tag " + std::to_string(static_cast<int>(tag)));
  }
  return *r;
}

uint32_t Payload::U32(Tag tag) const {
  const Record& r = Require(tag);
  if (r.data.size() != 4) Throw(Errc::kInvalidArgument, "record tag " + std::to_string(r.tag) + " is not a u32");
  return LoadLe<uint32_t>(r.data.data());
}

std::string Payload::Text(Tag tag) const {
  const Record& r = Require(tag);
  return std::string(r.data.begin(), r.data.end());
}

std::vector<float> Payload::Floats(Tag tag) const {
  const Record& r = Require(tag);
  if (r.data.size() % 4 != 0) Throw(Errc::kInvalidArgument, "float record length not a multiple of 4");
  std::vector<float> out(r.data.size() / 4);
  for (size_t i = 0; i < out.size(); ++i) out[i] = LoadLe<float>(r.data.data() + 4 * i);
  return out;
}

std::vector<Vid> Payload::Vids(Tag tag) const {
  const Record& r = Require(tag);
  if (r.data.size() % 4 != 0) Throw(Errc::kInvalidArgument, "VID record length not a multiple of 4");
  std::vector<Vid> out(r.data.size() / 4);
  for (size_t i = 0; i < out.size(); ++i) out[i] = LoadLe<uint32_t>(r.data.data() + 4 * i);
  return out;
}

std::vector<const Record*> Payload::All(Tag tag) const {
  std::vector<const Record*> out;
  for (const Record& r : records_) {
    if (r.tag == static_cast<uint8_t>(tag)) out.push_back(&r);
  }
  return out;
}

Payload Payload::WithoutTiming() const {
  Payload p;
  for (const Record& r : records_) {
    if (!IsTimingTag(r.tag)) p.records_.push_back(r);
  }
  return p;
}

Bytes ErrorPayload(Errc code, std::string_view message) {
  ByteWriter w;
  w.Put<uint32_t>(static_cast<uint32_t>(code));
  w.PutString(message);
  return Payload().Add(Tag::kError, w.Take()).Encode();
}

void RaiseIfError(const Payload& payload) {
  const Record* r = payload.Find(Tag::kError);
  if (r == nullptr) return;
  ByteReader rd(r->data);
  const uint32_t code = rd.Get<uint32_t>();
  std::string message = rd.GetString(rd.remaining());
  const Errc errc = code >= 1 && code <= static_cast<uint32_t>(Errc::kInternal) ? static_cast<Errc>(code)
                                                                                 : Errc::kInternal;
  Throw(errc, message);
}

// ---------------------------------------------------------------------------
// Values

namespace {

void PutName(ByteWriter& w, std::string_view s) {
  w.Put<uint32_t>(static_cast<uint32_t>(s.size()));
  w.PutString(s);
}

std::string GetName(ByteReader& r) {
  const uint32_t n = r.Get<uint32_t>();
  return r.GetString(n);
}

}  // namespace

Bytes EncodeNamedValue(std::string_view name, const Value& value) {
  ByteWriter w;
  PutName(w, name);
  w.Put<uint8_t>(static_cast<uint8_t>(value.index()));
  if (const auto* t = std::get_if<Tensor>(&value)) {
    w.Put<uint32_t>(static_cast<uint32_t>(t->rank()));
    for (size_t d : t->shape()) w.Put<uint64_t>(d);
    for (float f : t->data()) w.Put<float>(f);
  } else if (const auto* b = std::get_if<BatchRequest>(&value)) {
    w.Put<uint32_t>(static_cast<uint32_t>(b->targets.size()));
    for (Vid v : b->targets) w.Put<uint32_t>(v);
    w.Put<uint32_t>(static_cast<uint32_t>(b->fanouts.size()));
    for (uint32_t s : b->fanouts) w.Put<uint32_t>(s);
    w.Put<uint64_t>(b->seed);
    w.Put<uint8_t>(b->count_self_in_fanout ? 1 : 0);
  } else if (const auto* s = std::get_if<Scalar>(&value)) {
    w.Put<double>(s->value);
  } else {
    Throw(Errc::kInvalidArgument, "value \"" + std::string(name) + "\" of kind " + ValueKindName(value) +
                                      " cannot be sent over the wire");
  }
  return w.Take();
}

std::pair<std::string, Value> DecodeNamedValue(ByteSpan bytes) {
  ByteReader r(bytes);
  std::string name = GetName(r);
  const uint8_t kind = r.Get<uint8_t>();
  Value value;
  switch (kind) {
    case 0: {
      const uint32_t rank = r.Get<uint32_t>();
      if (rank < 1 || rank > 2) Throw(Errc::kDataLoss, "tensor rank must be 1 or 2");
      std::vector<size_t> shape(rank);
      size_t count = 1;
      for (size_t& d : shape) {
        d = static_cast<size_t>(r.Get<uint64_t>());
        if (d != 0 && count > r.remaining() / d) Throw(Errc::kDataLoss, "tensor larger than record");
        count *= d;
      }
      if (count * 4 != r.remaining()) Throw(Errc::kDataLoss, "tensor data length mismatch");
      std::vector<float> data(count);
      for (float& f : data) f = r.Get<float>();
      value = Tensor(std::move(shape), std::move(data));
      break;
    }
    case 2: {
      BatchRequest b;
      const uint32_t nt = r.Get<uint32_t>();
      if (nt > r.remaining() / 4) Throw(Errc::kDataLoss, "batch target count exceeds record");
      for (uint32_t i = 0; i < nt; ++i) b.targets.push_back(r.Get<uint32_t>());
      const uint32_t nf = r.Get<uint32_t>();
      if (nf > r.remaining() / 4) Throw(Errc::kDataLoss, "batch fanout count exceeds record");
      for (uint32_t i = 0; i < nf; ++i) b.fanouts.push_back(r.Get<uint32_t>());
      b.seed = r.Get<uint64_t>();
      b.count_self_in_fanout = r.Get<uint8_t>() != 0;
      value = std::move(b);
      break;
    }
    case 3:
      value = Scalar{r.Get<double>()};
      break;
    default:
      Throw(Errc::kDataLoss, "unknown value kind " + std::to_string(kind));
  }
  if (r.remaining() != 0) Throw(Errc::kDataLoss, "trailing bytes after value");
  return {std::move(name), std::move(value)};
}

Bytes EncodeCounters(const IoCounters& counters) {
  ByteWriter w;
  auto put = [&w](const IoCounterSet& s) {
    w.Put<uint64_t>(s.pages_read);
    w.Put<uint64_t>(s.pages_written);
    w.Put<uint64_t>(s.pages_trimmed);
    w.Put<uint64_t>(s.rmw_count);
  };
  put(counters.total);
  w.Put<uint32_t>(static_cast<uint32_t>(counters.by_tag.size()));
  for (const auto& [tag, set] : counters.by_tag) {
    PutName(w, tag);
    put(set);
  }
  return w.Take();
}

IoCounters DecodeCounters(ByteSpan bytes) {
  ByteReader r(bytes);
  auto get = [&r]() {
    IoCounterSet s;
    s.pages_read = r.Get<uint64_t>();
    s.pages_written = r.Get<uint64_t>();
    s.pages_trimmed = r.Get<uint64_t>();
    s.rmw_count = r.Get<uint64_t>();
    return s;
  };
  IoCounters c;
  c.total = get();
  const uint32_t n = r.Get<uint32_t>();
  for (uint32_t i = 0; i < n; ++i) {
    std::string tag = GetName(r);
    c.by_tag[tag] = get();
  }
  if (r.remaining() != 0) Throw(Errc::kDataLoss, "trailing bytes after counters");
  return c;
}

Bytes EncodeBreakdown(const Breakdown& b) {
  ByteWriter w;
  w.Put<int64_t>(b.graph_prep_ns);
  w.Put<int64_t>(b.batch_prep_ns);
  w.Put<uint64_t>(b.batch_io_pages);
  w.Put<int64_t>(b.infer_ns);
  return w.Take();
}

Breakdown DecodeBreakdown(ByteSpan bytes) {
  ByteReader r(bytes);
  Breakdown b;
  b.graph_prep_ns = r.Get<int64_t>();
  b.batch_prep_ns = r.Get<int64_t>();
  b.batch_io_pages = r.Get<uint64_t>();
  b.infer_ns = r.Get<int64_t>();
  return b;
}

}  // namespace hgnn::rpc
