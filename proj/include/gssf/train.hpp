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

// Supervised training of the recognizer with teacher forcing.

#ifndef GSSF_TRAIN_HPP_
#define GSSF_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gssf/ink.hpp"
#include "gssf/seq2seq.hpp"

namespace gssf {

struct TrainingExample {
  FeatureSequence features;
  std::vector<Index> tokens;  // end token excluded
};

struct LossAndGradients {
  double loss = 0.0;  // mean cross-entropy per target token, end tokens included
  Index token_count = 0;
  ModelParams gradients;
};

// Exact gradients of the mean token cross-entropy. Examples may be processed
// on `threads` workers; the reduction order is fixed, so the result does not
// depend on the thread count. Throws RuntimeFailure on a non-finite loss.
LossAndGradients loss_and_gradients(const ModelParams& params, std::span<const TrainingExample> batch,
                                    unsigned threads = 1);

// Mean cross-entropy without gradients.
double mean_loss(const ModelParams& params, std::span<const TrainingExample> batch, unsigned threads = 1);

// 1 - (summed edit distance of greedy decodes to labels) / (summed label
// length), floored at 0.
double token_accuracy(const ModelParams& params, std::span<const TrainingExample> examples,
                      Index max_decode_len, unsigned threads = 1);

struct TrainConfig {
  int max_epochs = 200;
  int patience = 20;
  double learning_rate = 1e-3;
  double clip_norm = 5.0;
  int batch_size = 16;
  double heldout_fraction = 0.2;
  Index max_decode_len = 32;
  unsigned threads = 1;
};

struct EpochReport {
  int epoch = 0;
  double train_loss = 0.0;
  double heldout_loss = 0.0;
  double heldout_accuracy = 0.0;
};

struct TrainResult {
  Vocabulary vocab;
  ModelParams params;  // best epoch
  std::vector<EpochReport> history;
  int best_epoch = 0;
  std::size_t train_size = 0;
  std::size_t heldout_size = 0;
};

// Builds the vocabulary from the labels, preprocesses every sample at
// arch.spacing, holds out a seeded fraction (everything doubles as
// held-out data when fewer than 5 samples are given) and runs Adam with
// global-norm clipping. Keeps the parameters with the best held-out token
// accuracy, breaking ties by lower held-out loss; stops after `patience`
// epochs without improvement. arch.vocab_size is filled in.
TrainResult train(const std::vector<RawInk>& dataset, ArchConfig arch, const TrainConfig& config,
                  std::uint64_t seed, const std::function<void(const EpochReport&)>& on_epoch = {});

}  // namespace gssf

#endif  // GSSF_TRAIN_HPP_
