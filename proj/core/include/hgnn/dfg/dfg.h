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


// Dataflow graphs of C-operations and their markup form:
//
//   inputs = {"Batch","Weight"}
//   1: "BatchPre" in={"Batch"} out={"1_0"}
//   2: "SpMM_Mean" in={"1_0"} out={"2_0"}
//   outputs = {"Result"="2_0"}
//
// Node outputs are labeled "<seq>_<index>". Labels only refer to inputs or to
// earlier nodes, so ascending seq is always a topological order.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hgnn {

struct DfgNode {
  uint32_t seq = 0;
  std::string op;
  std::vector<std::string> in;
  std::vector<std::string> out;

  friend bool operator==(const DfgNode&, const DfgNode&) = default;
};

class DataflowGraph {
 public:
  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<DfgNode>& nodes() const { return nodes_; }
  const std::map<std::string, std::string>& outputs() const { return outputs_; }

  // Builder interface. Each call validates against the graph built so far.
  void CreateIn(std::string name);
  // Returns the new node's seq; its outputs are "<seq>_0".."<seq>_<arity-1>".
  uint32_t CreateOp(std::string op, std::vector<std::string> in_labels, uint32_t out_arity = 1);
  void CreateOut(std::string name, std::string label);

  // Throws kInvalidArgument naming the first violated structural rule.
  void Validate() const;
  // Ascending seq.
  std::vector<uint32_t> TopoSort() const;

  std::string Save() const;
  // Throws kParse with a 1-based line number, or kInvalidArgument when the
  // text parses but describes an invalid graph.
  static DataflowGraph Load(std::string_view text);

  static std::string OutputLabel(uint32_t seq, uint32_t index);
  // True for labels of the "<seq>_<index>" form.
  static bool IsNodeLabel(std::string_view label);

  friend bool operator==(const DataflowGraph&, const DataflowGraph&) = default;

 private:
  bool Resolvable(std::string_view label, uint32_t before_seq) const;

  std::vector<std::string> inputs_;
  std::vector<DfgNode> nodes_;
  std::map<std::string, std::string> outputs_;
};

}  // namespace hgnn
