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

// Forward passes with the activations the backward pass needs. Inference and
// training both go through these, so teacher-forced and greedy scores of the
// same prefix are bit-identical.

#ifndef GSSF_SRC_MODEL_INTERNAL_HPP_
#define GSSF_SRC_MODEL_INTERNAL_HPP_

#include <vector>

#include "gssf/seq2seq.hpp"

namespace gssf::internal {

struct LayerTrace {
  Eigen::MatrixXd input;   // I x T
  Eigen::MatrixXd output;  // 2H x T
  std::vector<nn::GruStep<double>> forward;   // indexed by time
  std::vector<nn::GruStep<double>> backward;  // indexed by time
  bool pooled = false;  // input is the odd-step subsample of the layer below
};

struct EncoderTrace {
  std::vector<LayerTrace> layers;
};

// Keeps columns 0, 2, 4, ... (the 1st, 3rd, 5th time steps).
Eigen::MatrixXd drop_even_steps(const Eigen::MatrixXd& sequence);

Eigen::MatrixXd run_encoder(const ModelParams& params, const FeatureSequence& features,
                            EncoderTrace* trace);

// Per-sequence decoder inputs computed once.
struct DecoderContext {
  const Eigen::MatrixXd* annotations = nullptr;  // 2H x K'
  Eigen::MatrixXd projected;                     // A x K' = Uh * annotations
};

DecoderContext make_context(const ModelParams& params, const Eigen::MatrixXd& annotations);

struct StepTrace {
  Index prev_token = 0;
  Eigen::VectorXd state_prev;
  Eigen::VectorXd coverage_prev;
  Eigen::MatrixXd coverage_features;  // Q x K'
  Eigen::MatrixXd activation;         // A x K', tanh of the attention pre-activation
  Eigen::VectorXd attention;          // K'
  Eigen::VectorXd context;            // 2H
  nn::GruStep<double> gru;
  Eigen::VectorXd output_input;  // [s'; c; embed(y)]
  Eigen::VectorXd log_probs;     // V
};

Eigen::MatrixXd coverage_conv(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& coverage);

void decoder_step(const ModelParams& params, const DecoderContext& ctx, Index prev_token,
                  const Eigen::VectorXd& state, const Eigen::VectorXd& coverage, StepTrace& out);

Eigen::VectorXd initial_state(const ModelParams& params, const Eigen::MatrixXd& annotations);

}  // namespace gssf::internal

#endif  // GSSF_SRC_MODEL_INTERNAL_HPP_
