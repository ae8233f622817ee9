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

#include "gssf/seq2seq.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gssf/error.hpp"
#include "gssf/rng.hpp"
#include "model_internal.hpp"

namespace gssf {

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.size() < 2 || tokens_[kStart] != kStartToken || tokens_[kEnd] != kEndToken) {
    throw ValidationError("vocabulary must begin with <sos>, <eos>");
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<Index>(i)).second) {
      throw ValidationError("duplicate vocabulary token: " + tokens_[i]);
    }
  }
}

const std::string& Vocabulary::token(Index index) const {
  if (index < 0 || index >= size()) throw ValidationError("token index out of range");
  return tokens_[static_cast<std::size_t>(index)];
}

Index Vocabulary::index_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) throw ValidationError("unknown token: " + token);
  return it->second;
}

std::vector<Index> Vocabulary::encode(const std::vector<std::string>& symbols) const {
  std::vector<Index> out;
  out.reserve(symbols.size());
  for (const auto& s : symbols) out.push_back(index_of(s));
  return out;
}

std::vector<std::string> Vocabulary::decode(std::span<const Index> indices) const {
  std::vector<std::string> out;
  out.reserve(indices.size());
  for (Index i : indices) out.push_back(token(i));
  return out;
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& label_sequences) {
  if (label_sequences.empty()) throw ValidationError("cannot build a vocabulary from an empty corpus");
  std::set<std::string> symbols;
  for (const auto& seq : label_sequences) {
    for (const auto& s : seq) {
      if (s == Vocabulary::kStartToken || s == Vocabulary::kEndToken) {
        throw ValidationError("labels may not contain reserved token " + s);
      }
      symbols.insert(s);
    }
  }
  std::vector<std::string> tokens{Vocabulary::kStartToken, Vocabulary::kEndToken};
  tokens.insert(tokens.end(), symbols.begin(), symbols.end());
  return Vocabulary(std::move(tokens));
}

// ---------------------------------------------------------------------------
// Parameters

void ArchConfig::validate() const {
  const bool positive = vocab_size > 0 && embed_dim > 0 && enc_hidden > 0 && enc_layers > 0 &&
                        dec_hidden > 0 && attn_dim > 0 && coverage_channels > 0 && coverage_kernel > 0;
  if (!positive) throw ValidationError("architecture sizes must be positive");
  if (pool_layers < 0 || pool_layers >= enc_layers) {
    throw ValidationError("pool_layers must be in [0, enc_layers)");
  }
  if (coverage_kernel % 2 == 0) throw ValidationError("coverage_kernel must be odd");
  if (!(spacing > 0.0)) throw ValidationError("spacing must be positive");
}

ModelParams zero_params(const ArchConfig& config) {
  config.validate();
  const Index V = config.vocab_size, E = config.embed_dim, H = config.enc_hidden;
  const Index D = config.dec_hidden, A = config.attn_dim, Q = config.coverage_channels;
  ModelParams p;
  p.config = config;
  p.embedding = Eigen::MatrixXd::Zero(E, V);
  for (Index l = 0; l < config.enc_layers; ++l) {
    const Index input = l == 0 ? kFeatureDim : 2 * H;
    p.encoder.push_back({nn::GruWeights<double>(input, H), nn::GruWeights<double>(input, H)});
  }
  p.init_weight = Eigen::MatrixXd::Zero(D, 2 * H);
  p.init_bias = Eigen::VectorXd::Zero(D);
  p.attn_state = Eigen::MatrixXd::Zero(A, D);
  p.attn_annotation = Eigen::MatrixXd::Zero(A, 2 * H);
  p.attn_coverage = Eigen::MatrixXd::Zero(A, Q);
  p.attn_bias = Eigen::VectorXd::Zero(A);
  p.attn_score = Eigen::VectorXd::Zero(A);
  p.coverage_kernel = Eigen::MatrixXd::Zero(Q, config.coverage_kernel);
  p.decoder = nn::GruWeights<double>(E + 2 * H, D);
  p.out_weight = Eigen::MatrixXd::Zero(V, config.output_features());
  p.out_bias = Eigen::VectorXd::Zero(V);
  return p;
}

namespace {

bool is_bias(const std::string& name) {
  return name.ends_with(".b") || name.ends_with(".bias");
}

}  // namespace

ModelParams init_params(const ArchConfig& config, std::uint64_t seed) {
  ModelParams p = zero_params(config);
  Rng rng(seed);
  p.for_each_tensor([&](const std::string& name, auto& tensor) {
    if (is_bias(name)) return;
    const Index fan_in = tensor.cols() > 1 ? tensor.cols() : tensor.rows();
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (Index i = 0; i < tensor.size(); ++i) tensor.data()[i] = rng.uniform(-bound, bound);
  });
  return p;
}

void validate(const ModelParams& params) {
  const ModelParams shape = zero_params(params.config);
  if (params.encoder.size() != shape.encoder.size()) {
    throw ValidationError("encoder depth does not match the architecture");
  }
  std::vector<std::pair<Index, Index>> expected;
  shape.for_each_tensor([&](const std::string&, const auto& t) { expected.emplace_back(t.rows(), t.cols()); });
  std::size_t i = 0;
  params.for_each_tensor([&](const std::string& name, const auto& t) {
    if (t.rows() != expected[i].first || t.cols() != expected[i].second) {
      throw ValidationError("tensor " + name + " has inconsistent dimensions");
    }
    if (!t.allFinite()) throw ValidationError("tensor " + name + " has non-finite entries");
    ++i;
  });
}

Index ModelParams::parameter_count() const {
  Index n = 0;
  for_each_tensor([&](const std::string&, const auto& t) { n += t.size(); });
  return n;
}

// ---------------------------------------------------------------------------
// Forward passes

namespace internal {

Eigen::MatrixXd drop_even_steps(const Eigen::MatrixXd& sequence) {
  const Index kept = (sequence.cols() + 1) / 2;
  Eigen::MatrixXd out(sequence.rows(), kept);
  for (Index j = 0; j < kept; ++j) out.col(j) = sequence.col(2 * j);
  return out;
}

namespace {

void run_bigru(const BiGruLayer& layer, LayerTrace& trace) {
  const Index T = trace.input.cols();
  const Index H = layer.forward.hidden();
  trace.output.resize(2 * H, T);
  trace.forward.resize(static_cast<std::size_t>(T));
  trace.backward.resize(static_cast<std::size_t>(T));
  Eigen::VectorXd h = Eigen::VectorXd::Zero(H);
  for (Index t = 0; t < T; ++t) {
    auto& step = trace.forward[static_cast<std::size_t>(t)];
    nn::gru_forward(layer.forward, trace.input.col(t), h, step);
    h = step.h;
    trace.output.col(t).head(H) = h;
  }
  h.setZero();
  for (Index t = T - 1; t >= 0; --t) {
    auto& step = trace.backward[static_cast<std::size_t>(t)];
    nn::gru_forward(layer.backward, trace.input.col(t), h, step);
    h = step.h;
    trace.output.col(t).tail(H) = h;
  }
}

}  // namespace

Eigen::MatrixXd run_encoder(const ModelParams& params, const FeatureSequence& features,
                            EncoderTrace* trace) {
  if (features.rows() == 0) throw ValidationError("cannot encode an empty feature sequence");
  const Index layers = params.config.enc_layers;
  const Index first_pooled = layers - params.config.pool_layers;
  EncoderTrace local;
  EncoderTrace& tr = trace ? *trace : local;
  tr.layers.assign(static_cast<std::size_t>(layers), {});
  for (Index l = 0; l < layers; ++l) {
    auto& lt = tr.layers[static_cast<std::size_t>(l)];
    if (l == 0) {
      lt.input = features.transpose();
    } else {
      const auto& below = tr.layers[static_cast<std::size_t>(l - 1)].output;
      lt.pooled = l >= first_pooled;
      lt.input = lt.pooled ? drop_even_steps(below) : below;
    }
    run_bigru(params.encoder[static_cast<std::size_t>(l)], lt);
    if (!trace && l > 0) {
      // Inference only needs the layer below while building this one.
      tr.layers[static_cast<std::size_t>(l - 1)] = LayerTrace{};
    }
  }
  return tr.layers.back().output;
}

DecoderContext make_context(const ModelParams& params, const Eigen::MatrixXd& annotations) {
  DecoderContext ctx;
  ctx.annotations = &annotations;
  ctx.projected = params.attn_annotation * annotations;
  return ctx;
}

Eigen::MatrixXd coverage_conv(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& coverage) {
  const Index Q = kernel.rows(), width = kernel.cols(), K = coverage.size();
  const Index half = width / 2;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(Q, K);
  for (Index i = 0; i < K; ++i) {
    for (Index k = 0; k < width; ++k) {
      const Index j = i + k - half;
      if (j < 0 || j >= K) continue;
      out.col(i) += kernel.col(k) * coverage(j);
    }
  }
  return out;
}

void decoder_step(const ModelParams& params, const DecoderContext& ctx, Index prev_token,
                  const Eigen::VectorXd& state, const Eigen::VectorXd& coverage, StepTrace& out) {
  const Eigen::MatrixXd& ann = *ctx.annotations;
  out.prev_token = prev_token;
  out.state_prev = state;
  out.coverage_prev = coverage;
  out.coverage_features = coverage_conv(params.coverage_kernel, coverage);

  Eigen::MatrixXd pre = ctx.projected;
  pre.noalias() += params.attn_coverage * out.coverage_features;
  const Eigen::VectorXd query = params.attn_state * state + params.attn_bias;
  pre.colwise() += query;
  out.activation = pre.array().tanh().matrix();
  const Eigen::VectorXd energy = out.activation.transpose() * params.attn_score;
  out.attention = nn::softmax(energy);
  out.context = ann * out.attention;

  const Index E = params.config.embed_dim, C = ann.rows();
  Eigen::VectorXd input(E + C);
  input << params.embedding.col(prev_token), out.context;
  nn::gru_forward(params.decoder, input, state, out.gru);

  out.output_input.resize(params.config.output_features());
  out.output_input << out.gru.h, out.context, params.embedding.col(prev_token);
  out.log_probs = nn::log_softmax(params.out_weight * out.output_input + params.out_bias);
}

Eigen::VectorXd initial_state(const ModelParams& params, const Eigen::MatrixXd& annotations) {
  const Eigen::VectorXd mean = annotations.rowwise().mean();
  return (params.init_weight * mean + params.init_bias).array().tanh().matrix();
}

}  // namespace internal

Index pooled_length(Index length, Index pool_layers) {
  for (Index p = 0; p < pool_layers; ++p) length = (length + 1) / 2;
  return length;
}

Annotations encode(const ModelParams& params, const FeatureSequence& features) {
  Annotations ann;
  ann.vectors = internal::run_encoder(params, features, nullptr);
  ann.source_len = features.rows();
  return ann;
}

Eigen::VectorXd initial_state(const ModelParams& params, const Annotations& ann) {
  return internal::initial_state(params, ann.vectors);
}

DecoderStep decode_step(const ModelParams& params, Index prev_token, const Eigen::VectorXd& state,
                        const Annotations& ann, const Eigen::VectorXd& coverage) {
  if (state.size() != params.config.dec_hidden) throw ValidationError("decoder state has the wrong size");
  if (coverage.size() != ann.size()) throw ValidationError("coverage does not match the annotations");
  if (ann.vectors.rows() != params.config.annotation_dim()) {
    throw ValidationError("annotation width does not match the model");
  }
  if (prev_token < 0 || prev_token >= params.config.vocab_size) {
    throw ValidationError("previous token out of range");
  }
  const auto ctx = internal::make_context(params, ann.vectors);
  internal::StepTrace trace;
  internal::decoder_step(params, ctx, prev_token, state, coverage, trace);
  DecoderStep out;
  out.log_probs = trace.log_probs;
  out.probs = trace.log_probs.array().exp().matrix();
  out.state = trace.gru.h;
  out.attention = trace.attention;
  out.coverage = coverage + trace.attention;
  return out;
}

ScoredDecode greedy_decode(const ModelParams& params, const Annotations& ann, Index max_len) {
  if (max_len < 1) throw ValidationError("max_len must be at least 1");
  const auto ctx = internal::make_context(params, ann.vectors);
  Eigen::VectorXd state = internal::initial_state(params, ann.vectors);
  Eigen::VectorXd coverage = Eigen::VectorXd::Zero(ann.size());
  internal::StepTrace trace;
  ScoredDecode out;
  Index prev = Vocabulary::kStart;
  out.truncated = true;
  for (Index t = 0; t < max_len; ++t) {
    internal::decoder_step(params, ctx, prev, state, coverage, trace);
    Index best = 0;
    for (Index v = 1; v < trace.log_probs.size(); ++v) {
      if (trace.log_probs(v) > trace.log_probs(best)) best = v;
    }
    if (best == Vocabulary::kEnd) {
      out.truncated = false;
      break;
    }
    out.tokens.push_back(best);
    out.self_logprobs.push_back(trace.log_probs(best));
    state = trace.gru.h;
    coverage += trace.attention;
    prev = best;
  }
  return out;
}

std::vector<double> teacher_forced_logprobs(const ModelParams& params, const Annotations& ann,
                                            std::span<const Index> tokens) {
  if (tokens.empty()) throw ValidationError("teacher forcing needs at least one token");
  for (Index t : tokens) {
    if (t < 0 || t >= params.config.vocab_size) throw ValidationError("token index out of range");
  }
  const auto ctx = internal::make_context(params, ann.vectors);
  Eigen::VectorXd state = internal::initial_state(params, ann.vectors);
  Eigen::VectorXd coverage = Eigen::VectorXd::Zero(ann.size());
  internal::StepTrace trace;
  std::vector<double> out;
  out.reserve(tokens.size());
  Index prev = Vocabulary::kStart;
  for (Index t : tokens) {
    internal::decoder_step(params, ctx, prev, state, coverage, trace);
    out.push_back(trace.log_probs(t));
    state = trace.gru.h;
    coverage += trace.attention;
    prev = t;
  }
  return out;
}

}  // namespace gssf
