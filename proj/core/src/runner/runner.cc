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


#include "hgnn/runner/runner.h"

#include <dlfcn.h>

#include <algorithm>
#include <chrono>
#include <mutex>
#include <utility>

#include "hgnn/common/error.h"

namespace hgnn {

// ---------------------------------------------------------------------------
// Static plugins

namespace {

std::map<std::string, PluginInitFn, std::less<>>& StaticPlugins() {
  static std::map<std::string, PluginInitFn, std::less<>> plugins;
  return plugins;
}

std::mutex& StaticPluginsMutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

bool StaticPluginRegistry::Add(const std::string& name, PluginInitFn init) {
  std::lock_guard lock(StaticPluginsMutex());
  return StaticPlugins().emplace(name, init).second;
}

PluginInitFn StaticPluginRegistry::Find(std::string_view name) {
  std::lock_guard lock(StaticPluginsMutex());
  auto it = StaticPlugins().find(name);
  return it == StaticPlugins().end() ? nullptr : it->second;
}

std::vector<std::string> StaticPluginRegistry::Names() {
  std::lock_guard lock(StaticPluginsMutex());
  std::vector<std::string> names;
  for (const auto& [name, fn] : StaticPlugins()) names.push_back(name);
  return names;
}

// ---------------------------------------------------------------------------
// Registration

// Collects registrations so a plugin or bundle lands all-or-nothing.
class GraphRunner::StagingHost : public PluginHost {
 public:
  void RegisterDevice(const DeviceProfile& profile) override {
    profile.Validate();
    devices.push_back(profile);
  }
  void RegisterOpDefinition(const std::string& op, const std::string& device,
                            KernelFn kernel) override {
    Add(op, device, std::move(kernel), {});
  }
  void BindBuiltin(const std::string& op, const std::string& device,
                   const std::string& kernel_id) override {
    Add(op, device, BuiltinKernel(kernel_id), kernel_id);
  }

  void Add(const std::string& op, const std::string& device, KernelFn kernel, std::string id) {
    if (op.empty() || device.empty()) {
      Throw(Errc::kInvalidArgument, "operation and device names must be non-empty");
    }
    if (!kernel) Throw(Errc::kInvalidArgument, "kernel for " + op + " is empty");
    ops.push_back({op, OpEntry{device, std::move(id), std::move(kernel)}});
  }

  std::vector<DeviceProfile> devices;
  std::vector<std::pair<std::string, OpEntry>> ops;
};

GraphRunner::GraphRunner(const GraphStore* store) : store_(store) {
  StagingHost shell;
  for (const auto& [op, family] : BuiltinOperations()) {
    shell.BindBuiltin(op, std::string(kShellDevice), family + ".scalar");
  }
  devices_.emplace(std::string(kShellDevice),
                   DeviceEntry{DeviceProfile{std::string(kShellDevice), kShellPriority, {}},
                               next_registration_++, true});
  Commit(shell, false);
}

GraphRunner::~GraphRunner() {
  ops_.clear();
  devices_.clear();
  for (void* handle : modules_) dlclose(handle);
}

void GraphRunner::Commit(const StagingHost& staged, bool replace_user_logic) {
  if (replace_user_logic) {
    std::erase_if(devices_, [](const auto& kv) { return !kv.second.shell; });
    for (auto& [op, entries] : ops_) {
      std::erase_if(entries, [&](const OpEntry& e) {
        auto it = devices_.find(e.device);
        return it == devices_.end() || !it->second.shell;
      });
    }
    std::erase_if(ops_, [](const auto& kv) { return kv.second.empty(); });
  }
  for (const DeviceProfile& profile : staged.devices) {
    auto it = devices_.find(profile.name);
    const bool shell = it != devices_.end() && it->second.shell;
    devices_[profile.name] = DeviceEntry{profile, next_registration_++, shell};
  }
  for (const auto& [op, entry] : staged.ops) {
    std::vector<OpEntry>& entries = ops_[op];
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const OpEntry& e) { return e.device == entry.device; });
    if (it != entries.end()) {
      *it = entry;
    } else {
      entries.push_back(entry);
    }
  }
}

void GraphRunner::RegisterDevice(const DeviceProfile& profile) {
  StagingHost staged;
  staged.RegisterDevice(profile);
  std::unique_lock lock(mu_);
  Commit(staged, false);
}

void GraphRunner::RegisterOpDefinition(const std::string& op, const std::string& device,
                                       KernelFn kernel, std::string kernel_id) {
  StagingHost staged;
  staged.Add(op, device, std::move(kernel), std::move(kernel_id));
  std::unique_lock lock(mu_);
  Commit(staged, false);
}

void GraphRunner::BindBuiltin(const std::string& op, const std::string& device,
                              const std::string& kernel_id) {
  StagingHost staged;
  staged.BindBuiltin(op, device, kernel_id);
  std::unique_lock lock(mu_);
  Commit(staged, false);
}

void GraphRunner::RunPluginInit(PluginInitFn init, const std::string& what) {
  StagingHost staged;
  const int rc = init(&staged);
  if (rc != 0) {
    Throw(Errc::kFailedPrecondition, what + " init returned " + std::to_string(rc));
  }
  std::unique_lock lock(mu_);
  Commit(staged, false);
}

void GraphRunner::Plugin(const std::string& path) {
  void* handle = dlopen(path.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (handle == nullptr) {
    const char* err = dlerror();
    Throw(Errc::kIo, "cannot load plugin " + path + ": " + (err ? err : "unknown error"));
  }
  auto init = reinterpret_cast<PluginInitFn>(dlsym(handle, kPluginEntryPoint));
  if (init == nullptr) {
    dlclose(handle);
    Throw(Errc::kNotFound, "plugin " + path + " has no " + kPluginEntryPoint + " entry point");
  }
  try {
    RunPluginInit(init, "plugin " + path);
  } catch (...) {
    dlclose(handle);
    throw;
  }
  std::unique_lock lock(mu_);
  modules_.push_back(handle);
}

void GraphRunner::StaticPlugin(std::string_view name) {
  PluginInitFn init = StaticPluginRegistry::Find(name);
  if (init == nullptr) Throw(Errc::kNotFound, "no static plugin named " + std::string(name));
  RunPluginInit(init, "static plugin " + std::string(name));
}

void GraphRunner::Program(std::string_view bundle_text) { Program(ParseBundle(bundle_text)); }

void GraphRunner::Program(const ProfileBundle& bundle) {
  StagingHost staged;
  for (const DeviceProfile& d : bundle.devices) {
    if (d.name == kShellDevice) Throw(Errc::kInvalidArgument, "bundle may not redefine the shell device");
    staged.RegisterDevice(d);
  }
  for (const KernelBinding& b : bundle.bindings) {
    const bool declared = std::any_of(bundle.devices.begin(), bundle.devices.end(),
                                      [&](const DeviceProfile& d) { return d.name == b.device; });
    if (!declared) Throw(Errc::kInvalidArgument, "bundle binds undeclared device \"" + b.device + "\"");
    staged.BindBuiltin(b.op, b.device, b.kernel_id);
  }
  std::unique_lock lock(mu_, std::try_to_lock);
  if (!lock.owns_lock() || active_executions_.load() > 0) {
    Throw(Errc::kFailedPrecondition, "cannot program backends while a graph is executing");
  }
  Commit(staged, true);
}

// ---------------------------------------------------------------------------
// Dispatch

Dispatched GraphRunner::DispatchLocked(std::string_view op) const {
  auto it = ops_.find(op);
  if (it == ops_.end() || it->second.empty()) {
    Throw(Errc::kNotFound, "unknown operation \"" + std::string(op) + "\"");
  }
  const OpEntry* best = nullptr;
  const DeviceEntry* best_dev = nullptr;
  std::string orphans;
  for (const OpEntry& e : it->second) {
    auto d = devices_.find(e.device);
    if (d == devices_.end()) {
      orphans += (orphans.empty() ? "\"" : ", \"") + e.device + "\"";
      continue;
    }
    const DeviceEntry& dev = d->second;
    if (best_dev == nullptr || dev.profile.priority > best_dev->profile.priority ||
        (dev.profile.priority == best_dev->profile.priority &&
         dev.registration > best_dev->registration)) {
      best = &e;
      best_dev = &dev;
    }
  }
  if (best == nullptr) {
    Throw(Errc::kFailedPrecondition, "operation \"" + std::string(op) +
                                         "\" has no registered device; orphaned: " + orphans);
  }
  return Dispatched{best_dev->profile, best->kernel_id, best->kernel};
}

Dispatched GraphRunner::Dispatch(std::string_view op) const {
  std::shared_lock lock(mu_);
  return DispatchLocked(op);
}

std::vector<DeviceEntry> GraphRunner::Devices() const {
  std::shared_lock lock(mu_);
  std::vector<DeviceEntry> out;
  for (const auto& [name, entry] : devices_) out.push_back(entry);
  return out;
}

std::vector<std::pair<std::string, std::string>> GraphRunner::OperationEntries(
    std::string_view op) const {
  std::shared_lock lock(mu_);
  std::vector<std::pair<std::string, std::string>> out;
  auto it = ops_.find(op);
  if (it == ops_.end()) return out;
  for (const OpEntry& e : it->second) out.emplace_back(e.device, e.kernel_id);
  return out;
}

std::vector<std::string> GraphRunner::Operations() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [op, entries] : ops_) out.push_back(op);
  return out;
}

// ---------------------------------------------------------------------------
// Execution

ExecutionResult GraphRunner::Execute(const DataflowGraph& dfg,
                                     const std::map<std::string, Value>& inputs) const {
  ++active_executions_;
  struct Release {
    std::atomic<int>& n;
    ~Release() { --n; }
  } release{active_executions_};
  std::shared_lock lock(mu_);

  dfg.Validate();
  std::map<std::string, Value> env;
  for (const std::string& name : dfg.inputs()) {
    auto it = inputs.find(name);
    if (it == inputs.end()) Throw(Errc::kNotFound, "missing input \"" + name + "\"");
    env.emplace(name, it->second);
  }

  ExecutionResult result;
  const auto t0 = std::chrono::steady_clock::now();
  auto since = [t0]() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  for (uint32_t seq : dfg.TopoSort()) {
    const DfgNode& node = dfg.nodes()[seq - 1];
    const std::string where = "node " + std::to_string(seq) + " (" + node.op + "): ";
    try {
      std::vector<Value> args;
      args.reserve(node.in.size());
      for (const std::string& label : node.in) args.push_back(env.at(label));
      Dispatched d = DispatchLocked(node.op);
      KernelContext ctx{store_, &d.device, seq, 0};
      TraceEntry trace{seq, node.op, d.device.name, since(), 0};
      std::vector<Value> outs = d.kernel(ctx, args);
      trace.end_ns = since();
      if (outs.size() < node.out.size()) {
        Throw(Errc::kInternal, "kernel produced " + std::to_string(outs.size()) + " outputs, node declares " +
                                   std::to_string(node.out.size()));
      }
      for (size_t i = 0; i < node.out.size(); ++i) env.insert_or_assign(node.out[i], std::move(outs[i]));
      const int64_t spent = trace.end_ns - trace.start_ns;
      if (node.op == "BatchPre") {
        result.breakdown.batch_prep_ns += spent;
      } else {
        result.breakdown.infer_ns += spent;
      }
      result.breakdown.batch_io_pages += ctx.batch_io_pages;
      result.trace.push_back(std::move(trace));
    } catch (const Error& e) {
      Throw(e.code(), where + e.what());
    } catch (const std::exception& e) {
      Throw(Errc::kInternal, where + e.what());
    }
  }
  for (const auto& [name, label] : dfg.outputs()) result.outputs.emplace(name, env.at(label));
  return result;
}

}  // namespace hgnn
