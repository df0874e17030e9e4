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

// Raw dataset text formats accepted by bulk ingest.
//
// Edge array: one "src dst" pair of decimal VIDs per line, any whitespace
// between them. Lines starting with '#' and blank lines are ignored.
// Embeddings: the i-th data line holds the F decimal floats of VID i.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hgnn/graphstore/page_codec.h"

namespace hgnn {

using Edge = std::pair<Vid, Vid>;

// Throws kParse naming the 1-based line number on malformed input.
std::vector<Edge> ParseEdgeText(std::string_view text);

struct EmbeddingTextShape {
  uint32_t rows = 0;
  uint32_t feature_len = 0;
};

// Counts data lines and reads F from the first one without parsing the rest.
EmbeddingTextShape ScanEmbeddingText(std::string_view text);

// Streams every data line through `sink(row, floats)`. Each line must carry
// exactly `feature_len` values.
void ForEachEmbeddingRow(std::string_view text, uint32_t feature_len,
                         const std::function<void(uint32_t, std::span<const float>)>& sink);

}  // namespace hgnn
