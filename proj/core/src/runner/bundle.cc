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


#include "hgnn/runner/bundle.h"

#include <cctype>
#include <charconv>
#include <set>

#include "hgnn/common/error.h"
#include "hgnn/runner/runner.h"

namespace hgnn {

const std::vector<std::pair<std::string, std::string>>& BuiltinOperations() {
  static const std::vector<std::pair<std::string, std::string>> kOps = {
      {"BatchPre", "batchpre"},        {"SpMM_Mean", "spmm_mean"},
      {"SpMM_Sum", "spmm_sum"},        {"SpMM_NGCF", "spmm_ngcf"},
      {"GEMM", "gemm"},                {"ReLU", "relu"},
      {"ElementWise_Add", "add"},      {"ElementWise_Mul", "mul"},
      {"Identity", "identity"},        {"Reduce_Sum", "reduce_sum"},
      {"Reduce_Mean", "reduce_mean"},  {"Reduce_Max", "reduce_max"},
      {"SDDMM", "sddmm"},
  };
  return kOps;
}

std::string_view Table3Bundle() {
  static const std::string kText = [] {
    ProfileBundle b;
    b.devices.push_back({"Vector processor", 150, {{"lanes", 8}}});
    b.devices.push_back({"Systolic array", 300, {{"tile", 4}}});
    for (const auto& [op, family] : BuiltinOperations()) {
      if (family == "batchpre") continue;
      b.bindings.push_back({op, "Vector processor", family + ".lane"});
    }
    b.bindings.push_back({"GEMM", "Systolic array", "gemm.tile"});
    return FormatBundle(b);
  }();
  return kText;
}

namespace {

struct Cursor {
  std::string_view s;
  size_t pos = 0;
  size_t line = 0;

  [[noreturn]] void Fail(const std::string& msg) const {
    Throw(Errc::kParse, "line " + std::to_string(line) + ": " + msg);
  }
  void Skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool AtEnd() {
    Skip();
    return pos >= s.size();
  }
  bool Peek(std::string_view tok) {
    Skip();
    return s.substr(pos, tok.size()) == tok;
  }
  void Expect(std::string_view tok) {
    if (!Peek(tok)) Fail("expected '" + std::string(tok) + "'");
    pos += tok.size();
  }
  std::string Word() {
    Skip();
    const size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    if (start == pos) Fail("expected a keyword");
    return std::string(s.substr(start, pos - start));
  }
  std::string Quoted() {
    Skip();
    if (pos >= s.size() || s[pos] != '"') Fail("expected a quoted string");
    const size_t close = s.find('"', pos + 1);
    if (close == std::string_view::npos) Fail("unterminated string");
    std::string out(s.substr(pos + 1, close - pos - 1));
    pos = close + 1;
    return out;
  }
  int64_t Integer() {
    Skip();
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
    if (ec != std::errc{}) Fail("expected an integer");
    pos = static_cast<size_t>(ptr - s.data());
    return v;
  }
};

}  // namespace

ProfileBundle ParseBundle(std::string_view text) {
  ProfileBundle bundle;
  std::set<std::string, std::less<>> declared;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    Cursor c{line, 0, line_no};
    if (c.AtEnd()) continue;
    const std::string keyword = c.Word();
    if (keyword == "device") {
      DeviceProfile d;
      d.name = c.Quoted();
      if (d.name.empty()) c.Fail("device name must be non-empty");
      if (d.name == kShellDevice) c.Fail("\"" + d.name + "\" is a shell device");
      if (!declared.insert(d.name).second) c.Fail("device \"" + d.name + "\" declared twice");
      c.Expect("priority");
      d.priority = c.Integer();
      if (c.Peek("params")) {
        c.Expect("params");
        c.Expect("{");
        if (!c.Peek("}")) {
          while (true) {
            std::string key = c.Word();
            c.Expect("=");
            const int64_t value = c.Integer();
            if (value <= 0) c.Fail("parameter " + key + " must be positive");
            if (!d.params.emplace(key, value).second) c.Fail("parameter " + key + " repeated");
            if (c.Peek("}")) break;
            c.Expect(",");
          }
        }
        c.Expect("}");
      }
      bundle.devices.push_back(std::move(d));
    } else if (keyword == "bind") {
      KernelBinding b;
      b.op = c.Quoted();
      c.Expect("->");
      b.device = c.Quoted();
      c.Expect(":");
      b.kernel_id = c.Quoted();
      if (b.op.empty()) c.Fail("operation name must be non-empty");
      if (!declared.count(b.device)) c.Fail("bind targets undeclared device \"" + b.device + "\"");
      try {
        BuiltinKernel(b.kernel_id);
      } catch (const Error& e) {
        c.Fail(e.what());
      }
      bundle.bindings.push_back(std::move(b));
    } else {
      c.Fail("unknown directive '" + keyword + "'");
    }
    if (!c.AtEnd()) c.Fail("trailing content");
  }
  return bundle;
}

std::string FormatBundle(const ProfileBundle& bundle) {
  std::string out;
  for (const DeviceProfile& d : bundle.devices) {
    out += "device \"" + d.name + "\" priority " + std::to_string(d.priority);
    if (!d.params.empty()) {
      out += " params{";
      bool first = true;
      for (const auto& [k, v] : d.params) {
        if (!first) out += ',';
        first = false;
        out += k + "=" + std::to_string(v);
      }
      out += '}';
    }
    out += '\n';
  }
  for (const KernelBinding& b : bundle.bindings) {
    out += "bind \"" + b.op + "\" -> \"" + b.device + "\":\"" + b.kernel_id + "\"\n";
  }
  return out;
}

}  // namespace hgnn
