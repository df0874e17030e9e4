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


#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "commands.h"
#include "hgnn/common/error.h"

namespace {

using namespace hgnn::cli;

int ExitCodeFor(hgnn::Errc code) {
  switch (code) {
    case hgnn::Errc::kTransport:
      return kExitTransport;
    default:
      return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hgnn: graph storage, batch preparation and GNN inference on a simulated SSD"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Machine-readable output");

  CreateOptions create;
  auto* c = app.add_subcommand("create", "Create a zero-filled device image");
  c->add_option("--image", create.image, "Image path")->required();
  c->add_option("--page-size", create.page_size, "Page size in bytes (power of two >= 512)");
  c->add_option("--pages", create.pages, "Number of pages");

  IngestOptionsCli ingest;
  auto* i = app.add_subcommand("ingest", "Bulk-load an edge array and embedding table");
  i->add_option("--image", ingest.image, "Image path")->required()->check(CLI::ExistingFile);
  i->add_option("--graph", ingest.graph, "Edge array text file")->required()->check(CLI::ExistingFile);
  i->add_option("--embed", ingest.embed, "Embedding text file")->required()->check(CLI::ExistingFile);
  i->add_option("--min-capacity", ingest.min_capacity, "Minimum vertex capacity");

  RunOptions run;
  auto* r = app.add_subcommand("run", "Run one inference batch on an image or a server");
  r->add_option("--image", run.target.image, "Image path");
  r->add_option("--endpoint", run.target.endpoint, "Server endpoint (unix:/path or tcp:host:port)");
  r->add_option("--dfg", run.dfg, "DFG markup file")->required()->check(CLI::ExistingFile);
  r->add_option("--weights", run.weights, "Weight file")->check(CLI::ExistingFile);
  r->add_option("--batch", run.batch, "Batch size; targets are VIDs 0..N-1");
  r->add_option("--targets", run.targets, "Explicit target VIDs")->delimiter(',');
  r->add_option("--fanout", run.fanout, "Fanout per hop, outermost first")->delimiter(',')->required();
  r->add_option("--seed", run.seed, "Sampling seed");
  r->add_flag("--count-self", run.count_self, "Count the self-node toward each fanout");
  r->add_option("--program", run.program, "Profile bundle to program first")->check(CLI::ExistingFile);
  r->add_option("--plugin", run.plugins, "Kernel plugin to load first (path or static:<name>)");

  ServeOptions serve;
  auto* s = app.add_subcommand("serve", "Serve an image over a socket until SIGINT/SIGTERM");
  s->add_option("--image", serve.image, "Image path")->required()->check(CLI::ExistingFile);
  s->add_option("--endpoint", serve.endpoint, "Listen endpoint (unix:/path or tcp:host:port)")->required();
  s->add_option("--program", serve.program, "Profile bundle to program at start")->check(CLI::ExistingFile);
  s->add_option("--plugin", serve.plugins, "Kernel plugin to load at start");

  StreamOptions stream;
  auto* st = app.add_subcommand("stream", "Replay a synthetic mutable-graph update stream");
  st->add_option("--image", stream.image, "Image path")->required()->check(CLI::ExistingFile);
  st->add_option("--days", stream.spec.days, "Simulated days");
  st->add_option("--vertex-adds", stream.spec.vertex_adds, "Vertex adds per day");
  st->add_option("--edge-adds", stream.spec.edge_adds, "Edge adds per day");
  st->add_option("--vertex-deletes", stream.spec.vertex_deletes, "Vertex deletes per day");
  st->add_option("--edge-deletes", stream.spec.edge_deletes, "Edge deletes per day");
  st->add_option("--attachment", stream.spec.attachment, "Preferential attachment exponent");
  st->add_option("--seed", stream.spec.seed, "Stream seed");

  TargetOptions stats;
  auto* sa = app.add_subcommand("stats", "Print I/O counters and store statistics");
  sa->add_option("--image", stats.image, "Image path");
  sa->add_option("--endpoint", stats.endpoint, "Server endpoint");

  SynthOptions synth;
  auto* sy = app.add_subcommand("synth", "Write a synthetic power-law dataset");
  sy->add_option("--graph", synth.graph, "Edge array output")->required();
  sy->add_option("--embed", synth.embed, "Embedding output")->required();
  sy->add_option("--vertices", synth.vertices, "Vertex count");
  sy->add_option("--edges", synth.edges, "Edge count");
  sy->add_option("--features", synth.features, "Feature length");
  sy->add_option("--attachment", synth.attachment, "Preferential attachment exponent");
  sy->add_option("--seed", synth.seed, "Seed");

  ModelOptions model;
  auto* m = app.add_subcommand("model", "Write a seeded GCN/GIN/NGCF weight file and DFG");
  m->add_option("--kind", model.kind, "gcn, gin or ngcf");
  m->add_option("--layers", model.layers, "Layer count");
  m->add_option("--features", model.features, "Input feature length");
  m->add_option("--hidden", model.hidden, "Output width per layer")->delimiter(',');
  m->add_option("--eps", model.eps, "GIN self weight");
  m->add_option("--seed", model.seed, "Seed");
  m->add_option("--weights-out", model.weights_out, "Weight file output");
  m->add_option("--dfg-out", model.dfg_out, "DFG markup output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c) return RunCreate(create, json);
    if (*i) return RunIngest(ingest, json);
    if (*r) return RunRun(run, json);
    if (*s) return RunServe(serve, json);
    if (*st) return RunStream(stream, json);
    if (*sa) return RunStats(stats, json);
    if (*sy) return RunSynth(synth, json);
    if (*m) return RunModel(model, json);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "hgnn: %s\n", e.what());
    return kExitUsage;
  } catch (const hgnn::Error& e) {
    std::fprintf(stderr, "hgnn: %s\n", e.what());
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hgnn: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
