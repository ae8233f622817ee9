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

// Attention-based encoder-decoder recognizer over point-feature sequences.
//
// Encoder: a stack of bidirectional GRU layers over the L x 8 features. Each
// of the top `pool_layers` layers reads only the odd time steps (1st, 3rd,
// ...) of the layer below, so K' = ceil(L / 2^pool_layers) annotations
// reach the decoder.
//
// Decoder, one step with previous token y, state s and accumulated
// attention beta over the K' annotation columns h_i:
//   f      = conv1d(beta)                            coverage features, Q x K'
//   e_i    = v . tanh(Ws s + Uh h_i + Uf f_i + b)
//   alpha  = softmax(e),   c = sum_i alpha_i h_i
//   s'     = GRU([embed(y); c], s)
//   logits = Wo [s'; c; embed(y)] + bo
//   beta'  = beta + alpha
// The initial state is tanh(Winit mean_i(h_i) + binit).

#ifndef GSSF_SEQ2SEQ_HPP_
#define GSSF_SEQ2SEQ_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gssf/ink.hpp"
#include "gssf/nn.hpp"

namespace gssf {

using Eigen::Index;

class Vocabulary {
 public:
  static constexpr Index kStart = 0;
  static constexpr Index kEnd = 1;
  static constexpr const char* kStartToken = "<sos>";
  static constexpr const char* kEndToken = "<eos>";

  Vocabulary() = default;
  // `tokens` must start with the start and end tokens and be duplicate-free.
  explicit Vocabulary(std::vector<std::string> tokens);

  Index size() const { return static_cast<Index>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(Index index) const;
  Index index_of(const std::string& token) const;
  bool contains(const std::string& token) const { return index_.count(token) > 0; }

  std::vector<Index> encode(const std::vector<std::string>& symbols) const;
  std::vector<std::string> decode(std::span<const Index> indices) const;

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Index> index_;
};

// Start/end tokens followed by every distinct symbol in lexicographic order.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& label_sequences);

struct ArchConfig {
  Index vocab_size = 0;
  Index embed_dim = 32;
  Index enc_hidden = 32;  // per direction
  Index enc_layers = 2;
  Index pool_layers = 1;
  Index dec_hidden = 64;
  Index attn_dim = 32;
  Index coverage_channels = 8;
  Index coverage_kernel = 5;  // odd
  // Resampling spacing the model was trained with.
  double spacing = 0.1;

  Index annotation_dim() const { return 2 * enc_hidden; }
  Index output_features() const { return dec_hidden + annotation_dim() + embed_dim; }
  void validate() const;
  bool operator==(const ArchConfig&) const = default;
};

struct BiGruLayer {
  nn::GruWeights<double> forward;
  nn::GruWeights<double> backward;
};

struct ModelParams {
  ArchConfig config;
  Eigen::MatrixXd embedding;  // E x V, column per symbol
  std::vector<BiGruLayer> encoder;
  Eigen::MatrixXd init_weight;  // D x 2H
  Eigen::VectorXd init_bias;
  Eigen::MatrixXd attn_state;       // A x D
  Eigen::MatrixXd attn_annotation;  // A x 2H
  Eigen::MatrixXd attn_coverage;    // A x Q
  Eigen::VectorXd attn_bias;        // A
  Eigen::VectorXd attn_score;       // A
  Eigen::MatrixXd coverage_kernel;  // Q x kernel width
  nn::GruWeights<double> decoder;   // input E + 2H, hidden D
  Eigen::MatrixXd out_weight;       // V x (D + 2H + E)
  Eigen::VectorXd out_bias;

  // Visits every trainable tensor in a fixed order as f(name, tensor), where
  // tensor is an Eigen::MatrixXd or Eigen::VectorXd.
  template <class F>
  void for_each_tensor(F&& f) {
    visit(*this, f);
  }
  template <class F>
  void for_each_tensor(F&& f) const {
    visit(*this, f);
  }

  Index parameter_count() const;

 private:
  template <class Self, class F>
  static void visit(Self& self, F& f) {
    f("embedding", self.embedding);
    for (std::size_t l = 0; l < self.encoder.size(); ++l) {
      const std::string prefix = "encoder." + std::to_string(l) + ".";
      f(prefix + "fwd.W", self.encoder[l].forward.W);
      f(prefix + "fwd.U", self.encoder[l].forward.U);
      f(prefix + "fwd.b", self.encoder[l].forward.b);
      f(prefix + "bwd.W", self.encoder[l].backward.W);
      f(prefix + "bwd.U", self.encoder[l].backward.U);
      f(prefix + "bwd.b", self.encoder[l].backward.b);
    }
    f("init.W", self.init_weight);
    f("init.b", self.init_bias);
    f("attention.state", self.attn_state);
    f("attention.annotation", self.attn_annotation);
    f("attention.coverage", self.attn_coverage);
    f("attention.bias", self.attn_bias);
    f("attention.score", self.attn_score);
    f("coverage.kernel", self.coverage_kernel);
    f("decoder.W", self.decoder.W);
    f("decoder.U", self.decoder.U);
    f("decoder.b", self.decoder.b);
    f("output.W", self.out_weight);
    f("output.b", self.out_bias);
  }
};

// Correctly shaped parameters, all zero. With zero output weights every
// decoder distribution is uniform.
ModelParams zero_params(const ArchConfig& config);

// Weights uniform in +-1/sqrt(fan_in), biases zero; deterministic in seed.
ModelParams init_params(const ArchConfig& config, std::uint64_t seed);

// Throws ValidationError on inconsistent shapes or non-finite entries.
void validate(const ModelParams& params);

struct Annotations {
  Eigen::MatrixXd vectors;  // 2H x K'
  Index source_len = 0;

  Index size() const { return vectors.cols(); }
};

// K' after pooling an input of `length` points.
Index pooled_length(Index length, Index pool_layers);

Annotations encode(const ModelParams& params, const FeatureSequence& features);

struct DecoderStep {
  Eigen::VectorXd probs;      // V
  Eigen::VectorXd log_probs;  // V
  Eigen::VectorXd state;      // D
  Eigen::VectorXd attention;  // K'
  Eigen::VectorXd coverage;   // K'
};

Eigen::VectorXd initial_state(const ModelParams& params, const Annotations& ann);

DecoderStep decode_step(const ModelParams& params, Index prev_token, const Eigen::VectorXd& state,
                        const Annotations& ann, const Eigen::VectorXd& coverage);

struct ScoredDecode {
  std::vector<Index> tokens;  // end token excluded
  std::vector<double> self_logprobs;
  bool truncated = false;
};

// Argmax decoding from the start token; ties go to the lowest index.
ScoredDecode greedy_decode(const ModelParams& params, const Annotations& ann, Index max_len);

// log P(tokens[i] | ann, start, tokens[0..i-1]) for every i.
std::vector<double> teacher_forced_logprobs(const ModelParams& params, const Annotations& ann,
                                            std::span<const Index> tokens);

}  // namespace gssf

#endif  // GSSF_SEQ2SEQ_HPP_
