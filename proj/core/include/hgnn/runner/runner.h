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


// GraphRunner: device table, operation table, priority dispatch and
// sequential dataflow-graph execution.
//
// Built-in operation names: BatchPre, SpMM_Mean, SpMM_Sum, SpMM_NGCF, GEMM,
// ReLU, ElementWise_Add, ElementWise_Mul, Identity, Reduce_Sum, Reduce_Mean,
// Reduce_Max, SDDMM.
//
// SpMM_* take a SampledBatch followed by an optional feature Tensor (default:
// the batch embeddings) and an optional Scalar epsilon. They aggregate over
// the batch's outermost remaining layer and yield {aggregate, batch with that
// layer removed}; a node declaring one output keeps only the aggregate.

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hgnn/dfg/dfg.h"
#include "hgnn/graphstore/graph_store.h"
#include "hgnn/kernels/kernels.h"
#include "hgnn/runner/bundle.h"
#include "hgnn/runner/value.h"

namespace hgnn {

inline constexpr std::string_view kShellDevice = "CPU";
inline constexpr int64_t kShellPriority = 50;

struct KernelContext {
  const GraphStore* store = nullptr;
  const DeviceProfile* device = nullptr;
  uint32_t node_seq = 0;
  uint64_t batch_io_pages = 0;  // kernels add the pages they read
};

using KernelFn = std::function<std::vector<Value>(KernelContext&, std::span<const Value>)>;

// Throws kInvalidArgument for an unknown id. Ids look like "gemm.tile".
KernelFn BuiltinKernel(std::string_view kernel_id);
std::vector<std::string> BuiltinKernelIds();

struct DeviceEntry {
  DeviceProfile profile;
  uint64_t registration = 0;  // larger = more recent
  bool shell = false;
};

struct OpEntry {
  std::string device;
  std::string kernel_id;  // empty for kernels registered as bare functions
  KernelFn kernel;
};

struct Dispatched {
  DeviceProfile device;
  std::string kernel_id;
  KernelFn kernel;
};

struct TraceEntry {
  uint32_t seq = 0;
  std::string op;
  std::string device;
  int64_t start_ns = 0;
  int64_t end_ns = 0;
};

// Latency breakdown of one inference request, in nanoseconds.
struct Breakdown {
  int64_t graph_prep_ns = 0;
  int64_t batch_prep_ns = 0;
  uint64_t batch_io_pages = 0;
  int64_t infer_ns = 0;
  friend bool operator==(const Breakdown&, const Breakdown&) = default;
};

struct ExecutionResult {
  std::map<std::string, Value> outputs;
  std::vector<TraceEntry> trace;
  Breakdown breakdown;
};

// Interface handed to plugin init entry points.
class PluginHost {
 public:
  virtual ~PluginHost() = default;
  virtual void RegisterDevice(const DeviceProfile& profile) = 0;
  virtual void RegisterOpDefinition(const std::string& op, const std::string& device,
                                    KernelFn kernel) = 0;
  virtual void BindBuiltin(const std::string& op, const std::string& device,
                           const std::string& kernel_id) = 0;
};

using PluginInitFn = int (*)(PluginHost*);
inline constexpr const char* kPluginEntryPoint = "hgnn_init_kernel_plugin";

// Plugins compiled into the binary, for hosts without dynamic loading.
class StaticPluginRegistry {
 public:
  static bool Add(const std::string& name, PluginInitFn init);
  static PluginInitFn Find(std::string_view name);
  static std::vector<std::string> Names();
};

class GraphRunner {
 public:
  // Registers the shell device "CPU" with scalar kernels for every built-in
  // operation. `store` backs BatchPre and may be null.
  explicit GraphRunner(const GraphStore* store = nullptr);
  ~GraphRunner();
  GraphRunner(const GraphRunner&) = delete;
  GraphRunner& operator=(const GraphRunner&) = delete;

  // Re-registering an existing name replaces its profile and makes it the
  // most recent registration.
  void RegisterDevice(const DeviceProfile& profile);
  void RegisterDevice(const std::string& name, int64_t priority) {
    RegisterDevice(DeviceProfile{name, priority, {}});
  }
  // Replaces any kernel already registered for (op, device).
  void RegisterOpDefinition(const std::string& op, const std::string& device, KernelFn kernel,
                            std::string kernel_id = {});
  void BindBuiltin(const std::string& op, const std::string& device, const std::string& kernel_id);

  // Highest-priority live device for `op`; ties go to the most recently
  // registered device. kNotFound for an unknown op; kFailedPrecondition
  // naming the orphaned devices when none of the op's devices is registered.
  Dispatched Dispatch(std::string_view op) const;

  ExecutionResult Execute(const DataflowGraph& dfg, const std::map<std::string, Value>& inputs) const;

  // Loads a shared module and calls its hgnn_init_kernel_plugin entry point.
  void Plugin(const std::string& path);
  void StaticPlugin(std::string_view name);

  // Replaces all user-logic devices and their kernels with the bundle's.
  // kFailedPrecondition while any Execute is in flight.
  void Program(std::string_view bundle_text);
  void Program(const ProfileBundle& bundle);

  std::vector<DeviceEntry> Devices() const;
  std::vector<std::pair<std::string, std::string>> OperationEntries(std::string_view op) const;
  std::vector<std::string> Operations() const;

  const GraphStore* store() const { return store_; }

 private:
  class StagingHost;
  void Commit(const StagingHost& staged, bool replace_user_logic);
  void RunPluginInit(PluginInitFn init, const std::string& what);
  Dispatched DispatchLocked(std::string_view op) const;

  const GraphStore* store_;
  std::vector<void*> modules_;  // dlopen handles; outlive the kernels below
  mutable std::shared_mutex mu_;
  mutable std::atomic<int> active_executions_{0};
  uint64_t next_registration_ = 1;
  std::map<std::string, DeviceEntry, std::less<>> devices_;
  std::map<std::string, std::vector<OpEntry>, std::less<>> ops_;
};

}  // namespace hgnn

// Defines the entry point of a loadable kernel plugin.
#define HGNN_KERNEL_PLUGIN(host_param) \
  extern "C" __attribute__((visibility("default"))) int hgnn_init_kernel_plugin(::hgnn::PluginHost* host_param)

// Registers a compiled-in plugin under `name` at static-initialization time.
#define HGNN_STATIC_PLUGIN(name, init_fn) \
  static const bool hgnn_static_plugin_##init_fn = ::hgnn::StaticPluginRegistry::Add(name, init_fn)
