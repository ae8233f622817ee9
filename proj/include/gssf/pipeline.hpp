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

// End-to-end commands behind the gssf binary. Every command validates its
// inputs, writes its outputs, re-reads and checks them, and throws
// ValidationError (exit 2) or RuntimeFailure (exit 3) on failure.

#ifndef GSSF_PIPELINE_HPP_
#define GSSF_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gssf/cluster.hpp"
#include "gssf/sbr.hpp"
#include "gssf/seq2seq.hpp"
#include "gssf/similarity.hpp"
#include "gssf/train.hpp"

namespace gssf {

struct PipelineConfig {
  std::string spec;        // synth: spec file, or builtin:benchmark / builtin:benchmark-train
  std::string dataset;     // ink JSONL
  std::string checkpoint;  // model file
  std::string sbr;         // heatmap: SbR CSV
  std::string out_dir = ".";
  std::string output;  // synth/train/heatmap: explicit output file

  SimilarityKind kind = SimilarityKind::kGssf;
  ClusterMethod method = ClusterMethod::kKMeansSbr;
  std::optional<Index> k;  // empty: one cluster per category
  std::vector<std::uint64_t> seeds{0, 1, 2};
  std::optional<std::uint64_t> synth_seed;  // replaces the answer-set spec's seed
  NormalizationMode normalization = NormalizationMode::kGlobal;
  int restarts = 10;
  Index max_decode_len = 32;
  unsigned threads = 0;  // 0: all cores
  bool timings = false;

  std::vector<SimilarityKind> compare_kinds{SimilarityKind::kGssf, SimilarityKind::kAsymmetric,
                                            SimilarityKind::kMin, SimilarityKind::kMax,
                                            SimilarityKind::kNegEditDistance};
  std::vector<ClusterMethod> compare_methods{ClusterMethod::kKMeansSbr};

  ArchConfig arch;
  TrainConfig train;
  std::uint64_t train_seed = 0;

  void validate() const;
};

// Keys mirror the field names; "k" is an integer or "categories";
// "arch" and "train" are objects of the corresponding fields.
PipelineConfig parse_pipeline_config(const std::string& json_text);
PipelineConfig load_pipeline_config(const std::string& path);

// Reads GSSF_LOG (error, info, debug; default error) and routes logs to stderr.
void configure_logging();

int run_synth(const PipelineConfig& config);
int run_train(const PipelineConfig& config, std::ostream& epochs_out);
int run_cluster(const PipelineConfig& config);
int run_compare(const PipelineConfig& config);
int run_heatmap(const PipelineConfig& config);

// Per-seed clustering outcome on an already built similarity matrix.
struct ClusterRun {
  std::uint64_t seed = 0;
  Assignment assignment;
};

// Applies `method` to `raw` (unnormalized) for each seed. Complete linkage
// ignores the seed.
std::vector<ClusterRun> cluster_matrix(const SbRMatrix& raw, ClusterMethod method, Index k,
                                       const std::vector<std::uint64_t>& seeds, NormalizationMode mode,
                                       int restarts, unsigned threads);

}  // namespace gssf

#endif  // GSSF_PIPELINE_HPP_
