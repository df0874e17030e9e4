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

#include "hgnn/graphstore/text_formats.h"

#include <charconv>
#include <string>

namespace hgnn {

namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Iterates lines, skipping blank and '#' lines; `fn(line, lineno)`.
template <typename Fn>
void ForEachDataLine(std::string_view text, Fn&& fn) {
  size_t pos = 0;
  size_t lineno = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    size_t first = 0;
    while (first < line.size() && IsSpace(line[first])) ++first;
    if (first == line.size() || line[first] == '#') continue;
    if (!fn(line.substr(first), lineno)) return;
  }
}

[[noreturn]] void ParseFail(size_t lineno, const std::string& what) {
  Throw(Errc::kParse, "line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

std::vector<Edge> ParseEdgeText(std::string_view text) {
  std::vector<Edge> edges;
  ForEachDataLine(text, [&](std::string_view line, size_t lineno) {
    const char* p = line.data();
    const char* end = line.data() + line.size();
    uint64_t ids[2];
    for (int k = 0; k < 2; ++k) {
      while (p < end && IsSpace(*p)) ++p;
      auto [next, ec] = std::from_chars(p, end, ids[k]);
      if (ec != std::errc() || next == p) ParseFail(lineno, "expected two decimal VIDs");
      if (ids[k] >= kInvalidVid) ParseFail(lineno, "VID out of 32-bit range");
      p = next;
    }
    while (p < end && IsSpace(*p)) ++p;
    if (p != end) ParseFail(lineno, "trailing characters after edge");
    edges.emplace_back(static_cast<Vid>(ids[0]), static_cast<Vid>(ids[1]));
    return true;
  });
  return edges;
}

EmbeddingTextShape ScanEmbeddingText(std::string_view text) {
  EmbeddingTextShape shape;
  ForEachDataLine(text, [&](std::string_view line, size_t) {
    if (shape.rows == 0) {
      uint32_t tokens = 0;
      size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && IsSpace(line[i])) ++i;
        if (i == line.size()) break;
        ++tokens;
        while (i < line.size() && !IsSpace(line[i])) ++i;
      }
      shape.feature_len = tokens;
    }
    ++shape.rows;
    return true;
  });
  return shape;
}

void ForEachEmbeddingRow(std::string_view text, uint32_t feature_len,
                         const std::function<void(uint32_t, std::span<const float>)>& sink) {
  std::vector<float> row(feature_len);
  uint32_t index = 0;
  ForEachDataLine(text, [&](std::string_view line, size_t lineno) {
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (uint32_t k = 0; k < feature_len; ++k) {
      while (p < end && IsSpace(*p)) ++p;
      auto [next, ec] = std::from_chars(p, end, row[k]);
      if (ec != std::errc() || next == p) {
        ParseFail(lineno, "expected " + std::to_string(feature_len) + " floats");
      }
      p = next;
    }
    while (p < end && IsSpace(*p)) ++p;
    if (p != end) ParseFail(lineno, "more than " + std::to_string(feature_len) + " floats");
    sink(index++, row);
    return true;
  });
}

}  // namespace hgnn
