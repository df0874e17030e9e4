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


#include <gtest/gtest.h>

#include <random>

#include "hgnn/common/error.h"
#include "hgnn/dfg/dfg.h"

namespace hgnn {
namespace {

DataflowGraph GcnScript() {
  DataflowGraph g;
  g.CreateIn("Batch");
  g.CreateIn("Weight");
  g.CreateOp("BatchPre", {"Batch"});
  g.CreateOp("SpMM_Mean", {"1_0"});
  g.CreateOp("GEMM", {"2_0", "Weight"});
  g.CreateOp("ReLU", {"3_0"});
  g.CreateOut("Result", "4_0");
  return g;
}

Errc LoadError(std::string_view text, std::string* message = nullptr) {
  try {
    DataflowGraph::Load(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  return Errc::kInternal;
}

// Random valid graph: every input label refers to an input or an earlier
// node's output.
DataflowGraph RandomGraph(std::mt19937_64& rng) {
  DataflowGraph g;
  const size_t inputs = 1 + rng() % 4;
  for (size_t i = 0; i < inputs; ++i) g.CreateIn("in" + std::to_string(i) + (rng() % 2 ? " x" : ""));
  std::vector<std::string> labels = g.inputs();
  const char* ops[] = {"GEMM", "ReLU", "SpMM_Mean", "My Op", "Reduce_Sum", "op-\xc3\xa9"};
  const size_t nodes = rng() % 12;
  for (size_t n = 0; n < nodes; ++n) {
    std::vector<std::string> in;
    const size_t fan = rng() % 4;
    for (size_t k = 0; k < fan; ++k) in.push_back(labels[rng() % labels.size()]);
    const uint32_t arity = 1 + static_cast<uint32_t>(rng() % 3);
    const uint32_t seq = g.CreateOp(ops[rng() % 6], in, arity);
    for (uint32_t i = 0; i < arity; ++i) labels.push_back(DataflowGraph::OutputLabel(seq, i));
  }
  const size_t outs = rng() % 3;
  for (size_t o = 0; o < outs; ++o) {
    const std::string name = "out" + std::to_string(rng() % 5);
    if (!g.outputs().count(name)) g.CreateOut(name, labels[rng() % labels.size()]);
  }
  return g;
}

TEST(Dfg, GcnScriptShape) {
  const DataflowGraph g = GcnScript();
  ASSERT_EQ(g.nodes().size(), 4u);
  EXPECT_EQ(g.nodes()[2].op, "GEMM");
  EXPECT_EQ(g.nodes()[2].in, (std::vector<std::string>{"2_0", "Weight"}));
  EXPECT_EQ(g.TopoSort(), (std::vector<uint32_t>{1, 2, 3, 4}));
}

TEST(Dfg, CanonicalText) {
  const std::string text = GcnScript().Save();
  EXPECT_EQ(text,
            "inputs = {\"Batch\",\"Weight\"}\n"
            "1: \"BatchPre\" in={\"Batch\"} out={\"1_0\"}\n"
            "2: \"SpMM_Mean\" in={\"1_0\"} out={\"2_0\"}\n"
            "3: \"GEMM\" in={\"2_0\",\"Weight\"} out={\"3_0\"}\n"
            "4: \"ReLU\" in={\"3_0\"} out={\"4_0\"}\n"
            "outputs = {\"Result\"=\"4_0\"}\n");
  EXPECT_NE(text.find("3: \"GEMM\" in={\"2_0\",\"Weight\"} out={\"3_0\"}\n"), std::string::npos);
}

TEST(Dfg, PassThroughGraph) {
  DataflowGraph g;
  g.CreateIn("X");
  g.CreateOut("Y", "X");
  EXPECT_NO_THROW(g.Validate());
  EXPECT_TRUE(g.TopoSort().empty());
  EXPECT_EQ(DataflowGraph::Load(g.Save()), g);
}

TEST(Dfg, SingleNodeTopoSort) {
  DataflowGraph g;
  g.CreateOp("Identity", {});
  EXPECT_EQ(g.TopoSort(), (std::vector<uint32_t>{1}));
}

TEST(Dfg, BuilderErrors) {
  DataflowGraph g = GcnScript();
  EXPECT_THROW(g.CreateOut("Bad", "9_0"), Error);
  EXPECT_THROW(g.CreateOut("Result", "4_0"), Error);
  EXPECT_THROW(g.CreateIn("Batch"), Error);
  EXPECT_THROW(g.CreateIn("3_0"), Error);
  EXPECT_THROW(g.CreateIn("quo\"te"), Error);
  EXPECT_THROW(g.CreateOp("GEMM", {"5_0"}), Error);
  EXPECT_THROW(g.CreateOp("GEMM", {"4_1"}), Error);
  EXPECT_THROW(g.CreateOp("GEMM", {"Nope"}), Error);
  EXPECT_THROW(g.CreateOp("GEMM", {"Batch"}, 0), Error);
  EXPECT_EQ(g.nodes().size(), 4u);
}

TEST(Dfg, ParserIsWhitespaceInsensitiveAndSkipsComments) {
  const std::string text =
      "# GCN, one layer\n"
      "inputs={ \"Batch\" , \"Weight\" }\n"
      "\n"
      "1 :\"BatchPre\"   in = {\"Batch\"} out={\"1_0\"}   # sampling\n"
      "2: \"SpMM_Mean\" in={\"1_0\"} out={\"2_0\"}\n"
      "3: \"GEMM\" in={\"2_0\",\"Weight\"} out={\"3_0\"}\n"
      "4: \"ReLU\" in={\"3_0\"} out={\"4_0\"}\n"
      "outputs = { \"Result\" = \"4_0\" }\n";
  EXPECT_EQ(DataflowGraph::Load(text), GcnScript());
}

TEST(Dfg, OutOfOrderSeqIsParseError) {
  std::string msg;
  EXPECT_EQ(LoadError("inputs = {\"A\"}\n"
                      "2: \"ReLU\" in={\"A\"} out={\"2_0\"}\n"
                      "outputs = {}\n",
                      &msg),
            Errc::kParse);
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(Dfg, MalformedTextReportsLine) {
  std::string msg;
  EXPECT_EQ(LoadError("inputs = {\"A\"}\n1: \"ReLU\" in={\"A\" out={\"1_0\"}\noutputs = {}\n", &msg),
            Errc::kParse);
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_EQ(LoadError("inputs = {\"A\"}\n"), Errc::kParse);
  EXPECT_EQ(LoadError("inputs = {\"A\"}\n1: \"ReLU\" in={\"B\"} out={\"1_0\"}\noutputs = {}\n"),
            Errc::kInvalidArgument);
  EXPECT_EQ(LoadError("inputs = {\"A\"}\n1: \"ReLU\" in={\"A\"} out={\"1_1\"}\noutputs = {}\n"),
            Errc::kInvalidArgument);
  EXPECT_EQ(LoadError("inputs = {\"A\"}\noutputs = {\"R\"=\"1_0\"}\n"), Errc::kInvalidArgument);
}

TEST(DfgProperty, RoundTripOnFuzzedGraphs) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const DataflowGraph g = RandomGraph(rng);
    const std::string text = g.Save();
    const DataflowGraph back = DataflowGraph::Load(text);
    ASSERT_EQ(back, g) << text;
    ASSERT_EQ(back.Save(), text);
  }
}

TEST(DfgProperty, TopoSortSendsEveryEdgeForward) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const DataflowGraph g = RandomGraph(rng);
    const std::vector<uint32_t> order = g.TopoSort();
    ASSERT_EQ(order.size(), g.nodes().size());
    std::vector<size_t> pos(order.size() + 1);
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (const DfgNode& node : g.nodes()) {
      for (const std::string& label : node.in) {
        if (!DataflowGraph::IsNodeLabel(label)) continue;
        const uint32_t producer = static_cast<uint32_t>(std::stoul(label.substr(0, label.find('_'))));
        EXPECT_LT(pos[producer], pos[node.seq]);
      }
    }
  }
}

}  // namespace
}  // namespace hgnn
