// Copyright 2026 The GSSF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// gssf: synth | train | cluster | compare | heatmap

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gssf/cluster.hpp"
#include "gssf/error.hpp"
#include "gssf/pipeline.hpp"
#include "gssf/similarity.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> kind, method, k, out, spec, dataset, checkpoint, sbr, output;
  bool timings = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON config file");
  cmd->add_option("--seed", o.seed, "Seed (synth: answer set; train: init; cluster/compare: single clustering seed)");
  cmd->add_option("--threads", o.threads, "Worker threads, 0 = all cores");
  cmd->add_option("--out", o.out, "Output directory");
}

gssf::PipelineConfig resolve(const Overrides& o, const std::string& command) {
  gssf::PipelineConfig c = o.config.empty() ? gssf::PipelineConfig{} : gssf::load_pipeline_config(o.config);
  if (o.threads) c.threads = *o.threads;
  if (o.out) c.out_dir = *o.out;
  if (o.spec) c.spec = *o.spec;
  if (o.dataset) c.dataset = *o.dataset;
  if (o.checkpoint) c.checkpoint = *o.checkpoint;
  if (o.sbr) c.sbr = *o.sbr;
  if (o.output) c.output = *o.output;
  if (o.kind) c.kind = gssf::parse_similarity_kind(*o.kind);
  if (o.method) c.method = gssf::parse_cluster_method(*o.method);
  if (o.k) {
    if (*o.k == "categories") {
      c.k.reset();
    } else {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(*o.k, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != o.k->size()) throw gssf::ValidationError("--k must be an integer or 'categories'");
      c.k = static_cast<gssf::Index>(v);
    }
  }
  if (o.timings) c.timings = true;
  if (o.seed) {
    if (command == "train") {
      c.train_seed = *o.seed;
    } else if (command == "synth") {
      c.synth_seed = *o.seed;
    } else {
      c.seeds = {*o.seed};
    }
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustering of online handwritten answers by generative sequence similarity"};
  app.require_subcommand(1);
  Overrides o;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic answer set");
  add_common(synth, o);
  synth->add_option("--spec", o.spec, "Spec JSON, or builtin:benchmark / builtin:benchmark-train");
  synth->add_option("--output", o.output, "Output JSONL file (default OUT/answers.jsonl)");

  auto* train = app.add_subcommand("train", "Train the recognizer");
  add_common(train, o);
  train->add_option("--dataset", o.dataset, "Labelled ink JSONL");
  train->add_option("--output", o.output, "Checkpoint file (default OUT/model.ckpt)");

  auto* cluster = app.add_subcommand("cluster", "Score, cluster and evaluate an answer set");
  auto* compare = app.add_subcommand("compare", "Tabulate similarity kinds and methods over seeds");
  for (auto* cmd : {cluster, compare}) {
    add_common(cmd, o);
    cmd->add_option("--dataset", o.dataset, "Ink JSONL");
    cmd->add_option("--checkpoint", o.checkpoint, "Trained checkpoint");
    cmd->add_option("--kind", o.kind, "gssf|asym|min|max|edit");
    cmd->add_option("--method", o.method, "m3|m4|m5");
    cmd->add_option("--k", o.k, "Cluster count or 'categories'");
    cmd->add_flag("--timings", o.timings, "Record wall times in the report");
  }

  auto* heatmap = app.add_subcommand("heatmap", "Render an SbR CSV as a PGM image");
  add_common(heatmap, o);
  heatmap->add_option("--sbr", o.sbr, "SbR CSV");
  heatmap->add_option("--output", o.output, "PGM file (default OUT/heatmap.pgm)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    gssf::configure_logging();
    const std::string name = app.get_subcommands().front()->get_name();
    const gssf::PipelineConfig config = resolve(o, name);
    if (name == "synth") return gssf::run_synth(config);
    if (name == "train") return gssf::run_train(config, std::cout);
    if (name == "cluster") return gssf::run_cluster(config);
    if (name == "compare") return gssf::run_compare(config);
    return gssf::run_heatmap(config);
  } catch (const gssf::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gssf::RuntimeFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
