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


// Wire format of the storage-side service.
//
// Frame (little-endian):
//   magic "HGNN" | version u8 | opcode u8 | request_id u32 | payload_len u32 |
//   payload
// Payload: record_count u32, then record_count x {tag u8, len u32, bytes}.
// A failed request is answered with the request's opcode and id and a single
// kError record {code u32, message}.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hgnn/blockdev/simulated_ssd.h"
#include "hgnn/common/le_bytes.h"
#include "hgnn/graphstore/graph_store.h"
#include "hgnn/runner/runner.h"

namespace hgnn::rpc {

inline constexpr uint8_t kMagic[4] = {'H', 'G', 'N', 'N'};
inline constexpr uint8_t kVersion = 1;
inline constexpr size_t kHeaderSize = 14;
inline constexpr uint32_t kMaxPayload = 1u << 30;

enum class Opcode : uint8_t {
  kUpdateGraph = 1,
  kAddVertex = 2,
  kDeleteVertex = 3,
  kAddEdge = 4,
  kDeleteEdge = 5,
  kUpdateEmbed = 6,
  kGetEmbed = 7,
  kGetNeighbors = 8,
  kRun = 9,
  kPlugin = 10,
  kProgram = 11,
  kStats = 12,
};

const char* OpcodeName(Opcode op);
bool IsKnownOpcode(uint8_t op);
bool IsMutating(Opcode op);

struct Frame {
  uint8_t version = kVersion;
  uint8_t opcode = 0;
  uint32_t request_id = 0;
  Bytes payload;
  friend bool operator==(const Frame&, const Frame&) = default;
};

struct FrameHeader {
  uint8_t version = 0;
  uint8_t opcode = 0;
  uint32_t request_id = 0;
  uint32_t payload_len = 0;
};

Bytes EncodeFrame(const Frame& frame);
// Throws kDataLoss on a bad magic or an oversized length. The version is
// checked by the service so that a mismatch still gets a reply.
FrameHeader DecodeFrameHeader(ByteSpan header);
Frame DecodeFrame(ByteSpan bytes);

// Record tags. Tags may repeat (kInput, kOutput); order is preserved.
enum class Tag : uint8_t {
  kVid = 1,          // u32
  kSrc = 2,          // u32
  kDst = 3,          // u32
  kEmbedding = 4,    // f32 array
  kEdgeText = 5,     // text
  kEmbedText = 6,    // text
  kVids = 7,         // u32 array
  kDfg = 8,          // DFG markup text
  kInput = 9,        // named value
  kOutput = 10,      // named value
  kPath = 11,        // plugin path, or "static:<name>"
  kBundle = 12,      // profile bundle text
  kCounters = 13,    // IoCounters
  kBreakdown = 14,   // {graph_prep_ns i64, batch_prep_ns i64, batch_io_pages u64, infer_ns i64}
  kTiming = 15,      // ingest intervals, 4 x i64
  kStoreStats = 16,  // {update_requests, evictions, promotions} u64
  kMinCapacity = 17, // u32
  kIngest = 18,      // {vertex_count u32, edge_count u64}
  kError = 0xFF,     // {code u32, message}
};

// Tags whose content depends on wall-clock time.
bool IsTimingTag(uint8_t tag);

struct Record {
  uint8_t tag = 0;
  Bytes data;
  friend bool operator==(const Record&, const Record&) = default;
};

class Payload {
 public:
  Payload() = default;
  explicit Payload(std::vector<Record> records) : records_(std::move(records)) {}

  Bytes Encode() const;
  static Payload Decode(ByteSpan bytes);

  const std::vector<Record>& records() const { return records_; }
  Payload& Add(Tag tag, Bytes data);
  Payload& AddU32(Tag tag, uint32_t v);
  Payload& AddText(Tag tag, std::string_view text);
  Payload& AddFloats(Tag tag, std::span<const float> values);
  Payload& AddVids(Tag tag, std::span<const Vid> vids);

  bool Has(Tag tag) const { return Find(tag) != nullptr; }
  const Record* Find(Tag tag) const;
  // The Require* accessors throw kInvalidArgument naming a missing tag.
  const Record& Require(Tag tag) const;
  uint32_t U32(Tag tag) const;
  std::string Text(Tag tag) const;
  std::vector<float> Floats(Tag tag) const;
  std::vector<Vid> Vids(Tag tag) const;
  std::vector<const Record*> All(Tag tag) const;

  // Copy without timing-dependent records.
  Payload WithoutTiming() const;

  friend bool operator==(const Payload&, const Payload&) = default;

 private:
  std::vector<Record> records_;
};

Bytes ErrorPayload(Errc code, std::string_view message);
// Throws the carried error if `payload` is an error reply.
void RaiseIfError(const Payload& payload);

// Value codec: kind u8 (0 Tensor, 2 BatchRequest, 3 Scalar) then the body.
// SampledBatch values stay on the storage side and do not encode.
Bytes EncodeNamedValue(std::string_view name, const Value& value);
std::pair<std::string, Value> DecodeNamedValue(ByteSpan bytes);

Bytes EncodeCounters(const IoCounters& counters);
IoCounters DecodeCounters(ByteSpan bytes);
Bytes EncodeBreakdown(const Breakdown& b);
Breakdown DecodeBreakdown(ByteSpan bytes);

}  // namespace hgnn::rpc
