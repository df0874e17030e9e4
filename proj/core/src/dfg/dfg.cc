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


#include "hgnn/dfg/dfg.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <utility>

#include "hgnn/common/error.h"

namespace hgnn {

namespace {

[[noreturn]] void Invalid(const std::string& msg) { Throw(Errc::kInvalidArgument, msg); }

// Names are quoted verbatim in the markup, so they may not contain quotes,
// backslashes or control characters.
void RequireName(std::string_view name, const char* what) {
  if (name.empty()) Invalid(std::string(what) + " must be non-empty");
  for (unsigned char c : name) {
    if (c == '"' || c == '\\' || c < 0x20 || c == 0x7f) {
      Invalid(std::string(what) + " \"" + std::string(name) + "\" contains a reserved character");
    }
  }
}

bool ParseLabel(std::string_view label, uint32_t* seq, uint32_t* index) {
  const size_t us = label.find('_');
  if (us == std::string_view::npos || us == 0 || us + 1 == label.size()) return false;
  auto all_digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  const std::string_view a = label.substr(0, us), b = label.substr(us + 1);
  if (!all_digits(a) || !all_digits(b)) return false;
  uint32_t s = 0, i = 0;
  if (std::from_chars(a.data(), a.data() + a.size(), s).ec != std::errc{}) return false;
  if (std::from_chars(b.data(), b.data() + b.size(), i).ec != std::errc{}) return false;
  if (seq) *seq = s;
  if (index) *index = i;
  return true;
}

void AppendQuotedList(std::string& out, const std::vector<std::string>& items) {
  out += '{';
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += '"';
    out += items[i];
    out += '"';
  }
  out += '}';
}

}  // namespace

std::string DataflowGraph::OutputLabel(uint32_t seq, uint32_t index) {
  return std::to_string(seq) + "_" + std::to_string(index);
}

bool DataflowGraph::IsNodeLabel(std::string_view label) {
  return ParseLabel(label, nullptr, nullptr);
}

bool DataflowGraph::Resolvable(std::string_view label, uint32_t before_seq) const {
  uint32_t seq = 0, index = 0;
  if (ParseLabel(label, &seq, &index)) {
    if (seq == 0 || seq >= before_seq || seq > nodes_.size()) return false;
    return index < nodes_[seq - 1].out.size() && nodes_[seq - 1].out[index] == label;
  }
  return std::find(inputs_.begin(), inputs_.end(), label) != inputs_.end();
}

void DataflowGraph::CreateIn(std::string name) {
  RequireName(name, "input name");
  if (IsNodeLabel(name)) Invalid("input name \"" + name + "\" collides with node label syntax");
  if (std::find(inputs_.begin(), inputs_.end(), name) != inputs_.end()) {
    Invalid("duplicate input \"" + name + "\"");
  }
  inputs_.push_back(std::move(name));
}

uint32_t DataflowGraph::CreateOp(std::string op, std::vector<std::string> in_labels,
                                 uint32_t out_arity) {
  RequireName(op, "operation name");
  if (out_arity == 0) Invalid("operation \"" + op + "\" needs at least one output");
  const auto seq = static_cast<uint32_t>(nodes_.size() + 1);
  for (const std::string& label : in_labels) {
    if (!Resolvable(label, seq)) Invalid("node " + std::to_string(seq) + " input \"" + label + "\" is dangling");
  }
  DfgNode node;
  node.seq = seq;
  node.op = std::move(op);
  node.in = std::move(in_labels);
  for (uint32_t i = 0; i < out_arity; ++i) node.out.push_back(OutputLabel(seq, i));
  nodes_.push_back(std::move(node));
  return seq;
}

void DataflowGraph::CreateOut(std::string name, std::string label) {
  RequireName(name, "output name");
  if (outputs_.count(name)) Invalid("duplicate output \"" + name + "\"");
  if (!Resolvable(label, static_cast<uint32_t>(nodes_.size() + 1))) {
    Invalid("output \"" + name + "\" refers to unknown label \"" + label + "\"");
  }
  outputs_.emplace(std::move(name), std::move(label));
}

void DataflowGraph::Validate() const {
  std::set<std::string_view> seen;
  for (const std::string& name : inputs_) {
    RequireName(name, "input name");
    if (IsNodeLabel(name)) Invalid("input name \"" + name + "\" collides with node label syntax");
    if (!seen.insert(name).second) Invalid("duplicate input \"" + name + "\"");
  }
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const DfgNode& node = nodes_[i];
    if (node.seq != i + 1) {
      Invalid("node at position " + std::to_string(i + 1) + " has seq " + std::to_string(node.seq));
    }
    RequireName(node.op, "operation name");
    if (node.out.empty()) Invalid("node " + std::to_string(node.seq) + " has no outputs");
    for (size_t j = 0; j < node.out.size(); ++j) {
      if (node.out[j] != OutputLabel(node.seq, static_cast<uint32_t>(j))) {
        Invalid("node " + std::to_string(node.seq) + " output " + std::to_string(j) +
                " must be labeled " + OutputLabel(node.seq, static_cast<uint32_t>(j)));
      }
    }
    for (const std::string& label : node.in) {
      if (!Resolvable(label, node.seq)) {
        Invalid("node " + std::to_string(node.seq) + " input \"" + label + "\" is dangling");
      }
    }
  }
  const auto end = static_cast<uint32_t>(nodes_.size() + 1);
  for (const auto& [name, label] : outputs_) {
    RequireName(name, "output name");
    if (!Resolvable(label, end)) {
      Invalid("output \"" + name + "\" refers to unknown label \"" + label + "\"");
    }
  }
}

std::vector<uint32_t> DataflowGraph::TopoSort() const {
  std::vector<uint32_t> order;
  order.reserve(nodes_.size());
  for (const DfgNode& node : nodes_) order.push_back(node.seq);
  return order;
}

std::string DataflowGraph::Save() const {
  Validate();
  std::string out = "inputs = ";
  AppendQuotedList(out, inputs_);
  out += '\n';
  for (const DfgNode& node : nodes_) {
    out += std::to_string(node.seq);
    out += ": \"";
    out += node.op;
    out += "\" in=";
    AppendQuotedList(out, node.in);
    out += " out=";
    AppendQuotedList(out, node.out);
    out += '\n';
  }
  out += "outputs = {";
  bool first = true;
  for (const auto& [name, label] : outputs_) {
    if (!first) out += ',';
    first = false;
    out += '"' + name + "\"=\"" + label + '"';
  }
  out += "}\n";
  return out;
}

namespace {

enum class Tok { kWord, kInt, kString, kPunct, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  size_t line = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token Next() {
    SkipSpace();
    Token t;
    t.line = line_;
    if (pos_ >= text_.size()) return t;
    const char c = text_[pos_];
    if (c == '"') {
      const size_t start = ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n') Fail(t.line, "unterminated string");
        ++pos_;
      }
      if (pos_ >= text_.size()) Fail(t.line, "unterminated string");
      t.kind = Tok::kString;
      t.text = std::string(text_.substr(start, pos_ - start));
      ++pos_;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      t.kind = Tok::kInt;
      t.text = std::string(text_.substr(start, pos_ - start));
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      t.kind = Tok::kWord;
      t.text = std::string(text_.substr(start, pos_ - start));
      return t;
    }
    if (c == '{' || c == '}' || c == '=' || c == ',' || c == ':') {
      t.kind = Tok::kPunct;
      t.text = std::string(1, c);
      ++pos_;
      return t;
    }
    Fail(t.line, std::string("unexpected character '") + c + "'");
  }

  [[noreturn]] static void Fail(size_t line, const std::string& msg) {
    Throw(Errc::kParse, "line " + std::to_string(line) + ": " + msg);
  }

 private:
  void SkipSpace() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  size_t line_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { Advance(); }

  DataflowGraph Parse() {
    DataflowGraph g;
    std::vector<std::string> inputs;
    std::vector<DfgNode> nodes;
    std::vector<std::pair<std::string, std::string>> outputs;

    ExpectWord("inputs");
    ExpectPunct("=");
    inputs = StringList();
    while (cur_.kind == Tok::kInt) {
      DfgNode node;
      const size_t line = cur_.line;
      uint32_t seq = 0;
      auto [ptr, ec] = std::from_chars(cur_.text.data(), cur_.text.data() + cur_.text.size(), seq);
      if (ec != std::errc{}) Lexer::Fail(line, "node number out of range");
      if (seq != nodes.size() + 1) {
        Lexer::Fail(line, "node " + cur_.text + " out of order (expected " +
                              std::to_string(nodes.size() + 1) + ")");
      }
      node.seq = seq;
      Advance();
      ExpectPunct(":");
      node.op = ExpectString();
      ExpectWord("in");
      ExpectPunct("=");
      node.in = StringList();
      ExpectWord("out");
      ExpectPunct("=");
      node.out = StringList();
      nodes.push_back(std::move(node));
    }
    ExpectWord("outputs");
    ExpectPunct("=");
    ExpectPunct("{");
    if (!IsPunct("}")) {
      while (true) {
        std::string name = ExpectString();
        ExpectPunct("=");
        std::string label = ExpectString();
        outputs.emplace_back(std::move(name), std::move(label));
        if (IsPunct("}")) break;
        ExpectPunct(",");
      }
    }
    ExpectPunct("}");
    if (cur_.kind != Tok::kEnd) Lexer::Fail(cur_.line, "trailing content '" + cur_.text + "'");

    // Rebuild through the builder so every structural rule is enforced.
    for (std::string& name : inputs) g.CreateIn(std::move(name));
    for (DfgNode& node : nodes) {
      const auto arity = static_cast<uint32_t>(node.out.size());
      g.CreateOp(node.op, node.in, arity);
      if (g.nodes().back().out != node.out) {
        Invalid("node " + std::to_string(node.seq) + " output labels must be " +
                DataflowGraph::OutputLabel(node.seq, 0) + "..");
      }
    }
    for (auto& [name, label] : outputs) g.CreateOut(std::move(name), std::move(label));
    return g;
  }

 private:
  void Advance() { cur_ = lex_.Next(); }
  bool IsPunct(const char* p) const { return cur_.kind == Tok::kPunct && cur_.text == p; }
  std::string Describe() const { return cur_.kind == Tok::kEnd ? "end of input" : "'" + cur_.text + "'"; }

  void ExpectWord(const char* w) {
    if (cur_.kind != Tok::kWord || cur_.text != w) {
      Lexer::Fail(cur_.line, std::string("expected '") + w + "', found " + Describe());
    }
    Advance();
  }
  void ExpectPunct(const char* p) {
    if (!IsPunct(p)) Lexer::Fail(cur_.line, std::string("expected '") + p + "', found " + Describe());
    Advance();
  }
  std::string ExpectString() {
    if (cur_.kind != Tok::kString) Lexer::Fail(cur_.line, "expected a quoted string, found " + Describe());
    std::string s = std::move(cur_.text);
    Advance();
    return s;
  }
  std::vector<std::string> StringList() {
    std::vector<std::string> out;
    ExpectPunct("{");
    if (IsPunct("}")) {
      Advance();
      return out;
    }
    while (true) {
      out.push_back(ExpectString());
      if (IsPunct("}")) break;
      ExpectPunct(",");
    }
    Advance();
    return out;
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace

DataflowGraph DataflowGraph::Load(std::string_view text) { return Parser(text).Parse(); }

}  // namespace hgnn
