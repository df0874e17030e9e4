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


// Subcommands of the hgnn tool. Each Run* function returns the process exit
// code and reports failures by throwing.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hgnn/workload/update_stream.h"

namespace hgnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitTransport = 4;

// Flag combinations that parse but do not make sense together.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CreateOptions {
  std::string image;
  uint32_t page_size = 4096;
  uint64_t pages = 65536;
};

struct IngestOptionsCli {
  std::string image;
  std::string graph;
  std::string embed;
  uint32_t min_capacity = 0;
};

// Either a local image or a remote endpoint.
struct TargetOptions {
  std::string image;
  std::string endpoint;
};

struct RunOptions {
  TargetOptions target;
  std::string dfg;
  std::string weights;
  uint32_t batch = 0;
  std::vector<uint32_t> targets;
  std::vector<uint32_t> fanout;
  uint64_t seed = 0;
  bool count_self = false;
  std::string program;
  std::vector<std::string> plugins;
};

struct ServeOptions {
  std::string image;
  std::string endpoint;
  std::string program;
  std::vector<std::string> plugins;
};

struct StreamOptions {
  std::string image;
  UpdateStreamSpec spec;
};

struct SynthOptions {
  std::string graph;
  std::string embed;
  uint32_t vertices = 1000;
  uint64_t edges = 5000;
  uint32_t features = 16;
  double attachment = 1.0;
  uint64_t seed = 1;
};

struct ModelOptions {
  std::string kind = "gcn";
  uint32_t layers = 2;
  uint32_t features = 16;
  std::vector<uint32_t> hidden;
  float eps = 0.0f;
  uint64_t seed = 1;
  std::string weights_out;
  std::string dfg_out;
};

int RunCreate(const CreateOptions& o, bool json);
int RunIngest(const IngestOptionsCli& o, bool json);
int RunRun(const RunOptions& o, bool json);
int RunServe(const ServeOptions& o, bool json);
int RunStream(const StreamOptions& o, bool json);
int RunStats(const TargetOptions& o, bool json);
int RunSynth(const SynthOptions& o, bool json);
int RunModel(const ModelOptions& o, bool json);

}  // namespace hgnn::cli
