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

#include <latch>
#include <random>
#include <set>
#include <thread>

#include "hgnn/models/models.h"
#include "hgnn/runner/bundle.h"
#include "hgnn/runner/runner.h"
#include "hgnn/workload/update_stream.h"
#include "test_support.h"

namespace hgnn {
namespace {

using testing::MakeDevice;
using testing::ScratchDir;

Errc CodeOf(const std::function<void()>& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::kInternal;
}

int FailingInit(PluginHost*) { return 7; }
int TinyInit(PluginHost* host) {
  host->RegisterDevice(DeviceProfile{"Tiny", 10, {}});
  host->BindBuiltin("ReLU", "Tiny", "relu.lane");
  return 0;
}
HGNN_STATIC_PLUGIN("failing", FailingInit);
HGNN_STATIC_PLUGIN("tiny", TinyInit);

// A two-hop batch over three nodes, built by hand.
SampledBatch HandBatch() {
  SampledBatch b;
  b.original_ids = {10, 11, 12};
  b.new_ids = {{10, 0}, {11, 1}, {12, 2}};
  b.layers.push_back(LayerGraph{2, 3, {0, 2, 4}, {0, 1, 1, 2}, {2, 3, 2}});
  b.layers.push_back(LayerGraph{1, 2, {0, 2}, {0, 1}, {2, 3}});
  b.feature_len = 2;
  b.embeddings = {1, 2, 3, 4, 5, 6};
  return b;
}

TEST(GraphRunner, ShellDeviceServesEveryBuiltin) {
  GraphRunner runner;
  const auto devices = runner.Devices();
  ASSERT_EQ(devices.size(), 1u);
  EXPECT_EQ(devices[0].profile.name, "CPU");
  EXPECT_EQ(devices[0].profile.priority, 50);
  EXPECT_TRUE(devices[0].shell);
  for (const auto& [op, family] : BuiltinOperations()) {
    const Dispatched d = runner.Dispatch(op);
    EXPECT_EQ(d.device.name, "CPU");
    EXPECT_EQ(d.kernel_id, family + ".scalar");
  }
  EXPECT_EQ(runner.Operations().size(), BuiltinOperations().size());
}

TEST(GraphRunner, Table3PrioritiesSendGemmToSystolicArray) {
  GraphRunner runner;
  runner.Program(Table3Bundle());
  EXPECT_EQ(runner.Dispatch("GEMM").device.name, "Systolic array");
  EXPECT_EQ(runner.Dispatch("GEMM").kernel_id, "gemm.tile");
  EXPECT_EQ(runner.Dispatch("SpMM_Mean").device.name, "Vector processor");
  EXPECT_EQ(runner.Dispatch("SpMM_Mean").kernel_id, "spmm_mean.lane");
  EXPECT_EQ(runner.Dispatch("BatchPre").device.name, "CPU");
  EXPECT_EQ(runner.OperationEntries("GEMM").size(), 3u);
}

TEST(GraphRunner, TiesGoToMostRecentRegistration) {
  GraphRunner runner;
  runner.RegisterDevice("A", 100);
  runner.RegisterDevice("B", 100);
  runner.BindBuiltin("GEMM", "A", "gemm.lane");
  runner.BindBuiltin("GEMM", "B", "gemm.tile");
  EXPECT_EQ(runner.Dispatch("GEMM").device.name, "B");
  runner.RegisterDevice("A", 100);
  EXPECT_EQ(runner.Dispatch("GEMM").device.name, "A");
}

TEST(GraphRunner, UnknownAndOrphanedOperations) {
  GraphRunner runner;
  EXPECT_EQ(CodeOf([&] { runner.Dispatch("Nope"); }), Errc::kNotFound);
  runner.RegisterOpDefinition("Lonely", "Ghost", [](KernelContext&, std::span<const Value> a) {
    return std::vector<Value>(a.begin(), a.end());
  });
  std::string msg;
  EXPECT_EQ(CodeOf([&] { runner.Dispatch("Lonely"); }, &msg), Errc::kFailedPrecondition);
  EXPECT_NE(msg.find("\"Ghost\""), std::string::npos) << msg;
  runner.RegisterDevice("Ghost", 1);
  EXPECT_EQ(runner.Dispatch("Lonely").device.name, "Ghost");
  EXPECT_EQ(CodeOf([&] { runner.BindBuiltin("GEMM", "CPU", "gemm.quantum"); }),
            Errc::kInvalidArgument);
}

TEST(GraphRunnerProperty, ShiftingAllPrioritiesPreservesDispatch) {
  std::mt19937_64 rng(41);
  const std::vector<std::string> ops = {"GEMM", "ReLU", "SpMM_Mean", "Reduce_Sum"};
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t ndev = 1 + rng() % 5;
    std::vector<int64_t> prio(ndev);
    for (auto& p : prio) p = static_cast<int64_t>(rng() % 7) * 50;  // frequent ties
    std::vector<std::vector<bool>> binds(ndev, std::vector<bool>(ops.size()));
    for (auto& row : binds) {
      for (size_t o = 0; o < ops.size(); ++o) row[o] = rng() % 2;
    }
    const int64_t shift = static_cast<int64_t>(rng() % 2001) - 1000;
    auto build = [&](int64_t delta) {
      auto r = std::make_unique<GraphRunner>();
      r->RegisterDevice(DeviceProfile{"CPU", kShellPriority + delta, {}});
      for (size_t d = 0; d < ndev; ++d) {
        const std::string name = "D" + std::to_string(d);
        r->RegisterDevice(name, prio[d] + delta);
        for (size_t o = 0; o < ops.size(); ++o) {
          if (binds[d][o]) r->BindBuiltin(ops[o], name, "gemm.lane");
        }
      }
      return r;
    };
    const auto base = build(0);
    const auto shifted = build(shift);
    for (const std::string& op : ops) {
      ASSERT_EQ(base->Dispatch(op).device.name, shifted->Dispatch(op).device.name) << op;
    }
  }
}

TEST(GraphRunner, ExecutesElementwiseReduceAndSddmm) {
  GraphRunner runner;
  DataflowGraph g;
  g.CreateIn("A");
  g.CreateIn("B");
  g.CreateIn("Axis");
  g.CreateIn("Batch");
  g.CreateOp("ElementWise_Add", {"A", "B"});           // 1
  g.CreateOp("ElementWise_Mul", {"1_0", "B"});         // 2
  g.CreateOp("Reduce_Sum", {"2_0", "Axis"});           // 3
  g.CreateOp("Identity", {"3_0"});                     // 4
  g.CreateOp("BatchPre", {"Batch"});                   // 5
  g.CreateOp("SDDMM", {"5_0", "A", "B"});              // 6
  g.CreateOut("Sum", "4_0");
  g.CreateOut("Scores", "6_0");
  const Tensor a = Tensor::Matrix(3, 2, {1, 2, 3, 4, 5, 6});
  const Tensor b = Tensor::Matrix(3, 2, {1, 1, 2, 2, 3, 3});
  const auto result = runner.Execute(
      g, {{"A", a}, {"B", b}, {"Axis", Scalar{0}}, {"Batch", HandBatch()}});
  // (a + b) * b column sums: (2*1 + 5*2 + 8*3, 3*1 + 6*2 + 9*3).
  EXPECT_EQ(std::get<Tensor>(result.outputs.at("Sum")).data(), (std::vector<float>{36, 42}));
  // Outermost layer edges 0<-0, 0<-1, 1<-1, 1<-2 with <a_i, b_j>.
  EXPECT_EQ(std::get<Tensor>(result.outputs.at("Scores")).data(),
            (std::vector<float>{3, 6, 14, 21}));
  ASSERT_EQ(result.trace.size(), 6u);
  for (const TraceEntry& t : result.trace) {
    EXPECT_EQ(t.device, "CPU");
    EXPECT_LE(t.start_ns, t.end_ns);
  }
}

TEST(GraphRunner, MultiOutputSpmmPeelsLayers) {
  GraphRunner runner;
  DataflowGraph g;
  g.CreateIn("Batch");
  g.CreateOp("BatchPre", {"Batch"});
  g.CreateOp("SpMM_Sum", {"1_0"}, 2);
  g.CreateOp("SpMM_Sum", {"2_1", "2_0"});
  g.CreateOut("Result", "3_0");
  g.CreateOut("Rest", "2_1");
  const auto result = runner.Execute(g, {{"Batch", HandBatch()}});
  const auto& rest = std::get<SampledBatch>(result.outputs.at("Rest"));
  EXPECT_EQ(rest.layers.size(), 1u);
  // Hop 1: rows {1+3, 3+5} and {3+5, 4+6} -> [[4,6],[8,10]]; hop 2: row 0 = 4+8, 6+10.
  EXPECT_EQ(std::get<Tensor>(result.outputs.at("Result")).data(), (std::vector<float>{12, 16}));
}

TEST(GraphRunner, ExecutionErrorsNameTheNode) {
  GraphRunner runner;
  DataflowGraph g;
  g.CreateIn("A");
  g.CreateOp("ReLU", {"A"});
  g.CreateOp("GEMM", {"1_0", "A"});
  g.CreateOut("R", "2_0");
  EXPECT_EQ(CodeOf([&] { runner.Execute(g, {}); }), Errc::kNotFound);
  std::string msg;
  EXPECT_EQ(CodeOf([&] { runner.Execute(g, {{"A", Tensor::Zeros({2, 3})}}); }, &msg),
            Errc::kInvalidArgument);
  EXPECT_EQ(msg.rfind("node 2 (GEMM): ", 0), 0u) << msg;
}

TEST(GraphRunner, BatchPreSamplesFromStoreAndRecordsBreakdown) {
  ScratchDir dir;
  auto dev = MakeDevice(dir, 512, 256);
  GraphStore store(*dev);
  store.UpdateGraph(testing::kFiveVertexEdges, testing::FiveVertexEmbeddings());
  GraphRunner runner(&store);
  const ModelConfig cfg = RandomModel(ModelKind::kGcn, 2, 2, {3, 2}, 1);
  const auto result = runner.Execute(BuildDfg(cfg), BuildInputs(cfg, BatchRequest{{4, 0}, {2, 2}, 9}));
  const auto& out = std::get<Tensor>(result.outputs.at("Result"));
  EXPECT_EQ(out.shape(), (std::vector<size_t>{2, 2}));
  EXPECT_GT(result.breakdown.batch_io_pages, 0u);
  EXPECT_GT(result.breakdown.batch_prep_ns, 0);
  EXPECT_GT(result.breakdown.infer_ns, 0);
  GraphRunner storeless;
  EXPECT_EQ(CodeOf([&] {
              storeless.Execute(BuildDfg(cfg), BuildInputs(cfg, BatchRequest{{4}, {2, 2}, 9}));
            }),
            Errc::kFailedPrecondition);
}

TEST(GraphRunner, ProgramSwapChangesDispatchNotResults) {
  ScratchDir dir;
  auto dev = MakeDevice(dir, 512, 512);
  std::mt19937_64 rng(3);
  GraphStore store(*dev);
  store.UpdateGraph(FormatEdgeText(testing::RandomEdges(60, 200, rng)),
                    FormatEmbeddingText(60, 8, 4));
  GraphRunner runner(&store);
  for (ModelKind kind : {ModelKind::kGcn, ModelKind::kGin, ModelKind::kNgcf}) {
    const ModelConfig cfg = RandomModel(kind, 2, 8, {6, 5}, 2, 0.5f);
    const auto inputs = BuildInputs(cfg, BatchRequest{{1, 2, 3}, {3, 3}, 5});
    runner.Program("");  // shell only
    const auto before = runner.Execute(BuildDfg(cfg), inputs);
    runner.Program(Table3Bundle());
    const auto after = runner.Execute(BuildDfg(cfg), inputs);
    std::set<std::string> dev_before, dev_after;
    for (const auto& t : before.trace) dev_before.insert(t.device);
    for (const auto& t : after.trace) dev_after.insert(t.device);
    EXPECT_EQ(dev_before, (std::set<std::string>{"CPU"}));
    EXPECT_TRUE(dev_after.count("Systolic array"));
    EXPECT_TRUE(dev_after.count("Vector processor"));
    EXPECT_LE(MaxRelError(std::get<Tensor>(after.outputs.at("Result")),
                          std::get<Tensor>(before.outputs.at("Result"))),
              1e-5);
  }
}

TEST(GraphRunner, ProgramRefusedWhileExecuting) {
  GraphRunner runner;
  std::latch entered(1), release(1);
  runner.RegisterOpDefinition("Block", "CPU", [&](KernelContext&, std::span<const Value> a) {
    entered.count_down();
    release.wait();
    return std::vector<Value>(a.begin(), a.end());
  });
  DataflowGraph g;
  g.CreateIn("X");
  g.CreateOp("Block", {"X"});
  g.CreateOut("Y", "1_0");
  std::thread worker([&] { runner.Execute(g, {{"X", Scalar{1}}}); });
  entered.wait();
  EXPECT_EQ(CodeOf([&] { runner.Program(Table3Bundle()); }), Errc::kFailedPrecondition);
  release.count_down();
  worker.join();
  EXPECT_NO_THROW(runner.Program(Table3Bundle()));
}

TEST(GraphRunner, StaticPlugins) {
  GraphRunner runner;
  EXPECT_EQ(CodeOf([&] { runner.StaticPlugin("missing"); }), Errc::kNotFound);
  EXPECT_EQ(CodeOf([&] { runner.StaticPlugin("failing"); }), Errc::kFailedPrecondition);
  runner.StaticPlugin("tiny");
  EXPECT_EQ(runner.Dispatch("ReLU").device.name, "CPU");  // priority 10 < 50
  runner.RegisterDevice("Tiny", 60);
  EXPECT_EQ(runner.Dispatch("ReLU").device.name, "Tiny");
  const auto names = StaticPluginRegistry::Names();
  EXPECT_NE(std::find(names.begin(), names.end(), "tiny"), names.end());
}

#ifdef HGNN_SAMPLE_PLUGIN_PATH
TEST(GraphRunner, LoadsSharedPluginAndProgramDropsIt) {
  GraphRunner runner;
  runner.Plugin(HGNN_SAMPLE_PLUGIN_PATH);
  EXPECT_EQ(runner.Dispatch("GEMM").device.name, "FancyDev");
  DataflowGraph g;
  g.CreateIn("A");
  g.CreateOp("GEMM", {"A", "A"});
  g.CreateOp("MyOp", {"1_0"});
  g.CreateOut("R", "2_0");
  const auto r = runner.Execute(g, {{"A", Tensor::Matrix(2, 2, {1, 2, 3, 4})}});
  EXPECT_EQ(std::get<Tensor>(r.outputs.at("R")).data(), (std::vector<float>{14, 20, 30, 44}));
  runner.Program(Table3Bundle());
  EXPECT_EQ(runner.Dispatch("GEMM").device.name, "Systolic array");
  EXPECT_EQ(CodeOf([&] { runner.Dispatch("MyOp"); }), Errc::kNotFound);
}
#endif

TEST(GraphRunner, PluginLoadErrors) {
  GraphRunner runner;
  EXPECT_EQ(CodeOf([&] { runner.Plugin("/nonexistent/plugin.so"); }), Errc::kIo);
#ifdef HGNN_NO_ENTRY_PLUGIN_PATH
  EXPECT_EQ(CodeOf([&] { runner.Plugin(HGNN_NO_ENTRY_PLUGIN_PATH); }), Errc::kNotFound);
#endif
}

TEST(Bundle, FormatParseRoundTrip) {
  const ProfileBundle b = ParseBundle(Table3Bundle());
  ASSERT_EQ(b.devices.size(), 2u);
  EXPECT_EQ(b.devices[0], (DeviceProfile{"Vector processor", 150, {{"lanes", 8}}}));
  EXPECT_EQ(b.devices[1], (DeviceProfile{"Systolic array", 300, {{"tile", 4}}}));
  EXPECT_EQ(ParseBundle(FormatBundle(b)), b);
  EXPECT_EQ(FormatBundle(b), Table3Bundle());
}

TEST(Bundle, AcceptsCommentsAndOptionalParams) {
  const ProfileBundle b = ParseBundle(
      "# accelerators\n"
      "device \"V\" priority 7\n"
      "\n"
      "bind \"ReLU\" -> \"V\":\"relu.lane\"  # vectorized\n");
  EXPECT_EQ(b.devices[0], (DeviceProfile{"V", 7, {}}));
  EXPECT_EQ(b.bindings[0], (KernelBinding{"ReLU", "V", "relu.lane"}));
}

TEST(Bundle, ErrorsCarryLineNumbers) {
  auto line_of = [](std::string_view text) {
    std::string msg;
    EXPECT_EQ(CodeOf([&] { ParseBundle(text); }, &msg), Errc::kParse);
    return msg;
  };
  EXPECT_NE(line_of("device \"CPU\" priority 1\n").find("line 1"), std::string::npos);
  EXPECT_NE(line_of("device \"V\" priority 1\nbind \"GEMM\" -> \"W\":\"gemm.lane\"\n").find("line 2"),
            std::string::npos);
  EXPECT_NE(line_of("device \"V\" priority 1\n\nbind \"GEMM\" -> \"V\":\"gemm.warp\"\n").find("line 3"),
            std::string::npos);
  EXPECT_NE(line_of("device \"V\" priority x\n").find("line 1"), std::string::npos);
  EXPECT_NE(line_of("device \"V\" priority 1 params{lanes=0}\n").find("line 1"), std::string::npos);
  EXPECT_NE(line_of("devise \"V\" priority 1\n").find("line 1"), std::string::npos);
}

}  // namespace
}  // namespace hgnn
