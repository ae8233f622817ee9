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

// Small hand-built models and data shared by the unit and acceptance tests.

#ifndef GSSF_TESTS_FIXTURES_HPP_
#define GSSF_TESTS_FIXTURES_HPP_

#include <cmath>
#include <vector>

#include "gssf/ink.hpp"
#include "gssf/rng.hpp"
#include "gssf/seq2seq.hpp"
#include "gssf/similarity.hpp"
#include "gssf/train.hpp"

namespace fixture {

using Eigen::Index;

// V=4, E=H=3, two encoder layers with one pooled, coverage 2 x 3.
inline gssf::ArchConfig tiny_arch() {
  gssf::ArchConfig a;
  a.vocab_size = 4;
  a.embed_dim = 3;
  a.enc_hidden = 3;
  a.enc_layers = 2;
  a.pool_layers = 1;
  a.dec_hidden = 3;
  a.attn_dim = 3;
  a.coverage_channels = 2;
  a.coverage_kernel = 3;
  return a;
}

inline gssf::FeatureSequence random_features(gssf::Rng& rng, Index length) {
  gssf::FeatureSequence f(length, gssf::kFeatureDim);
  for (Index i = 0; i < length; ++i) {
    for (Index c = 0; c < gssf::kFeatureDim; ++c) f(i, c) = rng.uniform(-1.0, 1.0);
  }
  return f;
}

inline std::vector<gssf::TrainingExample> tiny_batch(std::uint64_t seed) {
  gssf::Rng rng(seed);
  return {{random_features(rng, 5), {2, 3, 2}}, {random_features(rng, 4), {3}}};
}

// A model whose next-token distribution depends only on the previous token:
// every weight is zero except a one-hot embedding and an output block that
// maps the embedding of the previous token to log-probabilities. With zero
// encoder and decoder weights the annotations, context and decoder state are
// all exactly zero, so logits = out_weight[:, emb] * onehot(prev) + out_bias.
struct TwoStep {
  gssf::ModelParams params;
  gssf::AnswerScoring a;  // the answer being explained
  gssf::AnswerScoring b;  // the conditioning answer
};

// P(y1|b)=0.5, P(y2|b)=0.25 from the model; a records self-probabilities 0.9
// and 0.8 for the same two tokens.
inline TwoStep two_step() {
  gssf::ArchConfig arch = tiny_arch();
  arch.embed_dim = 4;
  TwoStep t;
  t.params = gssf::zero_params(arch);
  t.params.embedding.setIdentity();
  const Index emb_col = arch.dec_hidden + arch.annotation_dim();
  // Distribution after the start token puts 0.5 on token 2; after token 2 it
  // puts 0.25 on token 3. Remaining mass shared evenly.
  const Eigen::Vector4d after_start(0.5 / 3, 0.5 / 3, 0.5, 0.5 / 3);
  const Eigen::Vector4d after_y1(0.25, 0.25, 0.25, 0.25);
  t.params.out_weight.col(emb_col + gssf::Vocabulary::kStart) = after_start.array().log().matrix();
  t.params.out_weight.col(emb_col + 2) = after_y1.array().log().matrix();

  gssf::Rng rng(11);
  t.b = gssf::score_answer(t.params, "b", random_features(rng, 6), 8);
  t.a.id = "a";
  t.a.annotations = t.b.annotations;
  t.a.decode.tokens = {2, 3};
  t.a.decode.self_logprobs = {std::log(0.9), std::log(0.8)};
  return t;
}

// One three-point stroke with extent on both axes.
inline gssf::RawInk simple_ink(const std::string& id) {
  gssf::RawInk ink;
  ink.id = id;
  gssf::Stroke s(2, 3);
  s << 0.0, 1.0, 2.0, 0.0, 0.5, 1.0;
  ink.strokes.push_back(s);
  return ink;
}

}  // namespace fixture

#endif  // GSSF_TESTS_FIXTURES_HPP_
