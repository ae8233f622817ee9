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

#include "gssf/train.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "gssf/edit_distance.hpp"
#include "gssf/error.hpp"
#include "gssf/parallel.hpp"
#include "gssf/rng.hpp"
#include "model_internal.hpp"

namespace gssf {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<std::span<double>> flat(ModelParams& p) {
  std::vector<std::span<double>> out;
  p.for_each_tensor([&](const std::string&, auto& t) {
    out.emplace_back(t.data(), static_cast<std::size_t>(t.size()));
  });
  return out;
}

struct ExampleResult {
  long double logprob = 0.0L;
  Index tokens = 0;
  ModelParams grad;
};

// Backward through one bidirectional layer; returns d(loss)/d(layer input).
MatrixXd bigru_backward(const BiGruLayer& layer, const internal::LayerTrace& trace, const MatrixXd& d_output,
                        BiGruLayer& grad) {
  const Index T = trace.input.cols();
  const Index H = layer.forward.hidden();
  MatrixXd d_input = MatrixXd::Zero(trace.input.rows(), T);
  VectorXd dx, dh_prev;
  VectorXd dh = VectorXd::Zero(H);
  for (Index t = T - 1; t >= 0; --t) {
    const VectorXd total = d_output.col(t).head(H) + dh;
    nn::gru_backward(layer.forward, trace.forward[static_cast<std::size_t>(t)], total, grad.forward, dx, dh_prev);
    d_input.col(t) += dx;
    dh = dh_prev;
  }
  dh.setZero();
  for (Index t = 0; t < T; ++t) {
    const VectorXd total = d_output.col(t).tail(H) + dh;
    nn::gru_backward(layer.backward, trace.backward[static_cast<std::size_t>(t)], total, grad.backward, dx,
                     dh_prev);
    d_input.col(t) += dx;
    dh = dh_prev;
  }
  return d_input;
}

ExampleResult example_gradients(const ModelParams& params, const TrainingExample& ex) {
  const auto& cfg = params.config;
  const Index E = cfg.embed_dim, D = cfg.dec_hidden;

  internal::EncoderTrace enc;
  const MatrixXd ann = internal::run_encoder(params, ex.features, &enc);
  const Index K = ann.cols(), C = ann.rows();
  const auto ctx = internal::make_context(params, ann);
  const VectorXd mean = ann.rowwise().mean();
  const VectorXd s0 = internal::initial_state(params, ann);

  std::vector<Index> targets = ex.tokens;
  targets.push_back(Vocabulary::kEnd);
  const std::size_t steps = targets.size();
  std::vector<internal::StepTrace> trace(steps);

  ExampleResult res;
  res.tokens = static_cast<Index>(steps);
  VectorXd state = s0;
  VectorXd coverage = VectorXd::Zero(K);
  for (std::size_t t = 0; t < steps; ++t) {
    const Index prev = t == 0 ? Vocabulary::kStart : targets[t - 1];
    internal::decoder_step(params, ctx, prev, state, coverage, trace[t]);
    res.logprob += trace[t].log_probs(targets[t]);
    state = trace[t].gru.h;
    coverage += trace[t].attention;
  }

  res.grad = zero_params(cfg);
  ModelParams& g = res.grad;
  MatrixXd d_ann = MatrixXd::Zero(C, K);
  MatrixXd d_projected = MatrixXd::Zero(cfg.attn_dim, K);
  VectorXd d_state = VectorXd::Zero(D);
  VectorXd d_coverage = VectorXd::Zero(K);
  VectorXd dx, d_state_prev;
  const Index half = cfg.coverage_kernel / 2;

  for (std::size_t t = steps; t-- > 0;) {
    const auto& tr = trace[t];
    VectorXd d_logits = tr.log_probs.array().exp().matrix();
    d_logits(targets[t]) -= 1.0;
    g.out_weight.noalias() += d_logits * tr.output_input.transpose();
    g.out_bias += d_logits;
    const VectorXd d_out = params.out_weight.transpose() * d_logits;

    const VectorXd d_h = d_state + d_out.head(D);
    VectorXd d_context = d_out.segment(D, C);
    VectorXd d_embed = d_out.tail(E);
    nn::gru_backward(params.decoder, tr.gru, d_h, g.decoder, dx, d_state_prev);
    d_embed += dx.head(E);
    d_context += dx.tail(C);
    g.embedding.col(tr.prev_token) += d_embed;

    // context = ann * attention; coverage_t = coverage_{t-1} + attention
    d_ann.noalias() += d_context * tr.attention.transpose();
    const VectorXd d_attention = ann.transpose() * d_context + d_coverage;
    const double dot = tr.attention.dot(d_attention);
    const VectorXd d_energy = tr.attention.cwiseProduct((d_attention.array() - dot).matrix());

    g.attn_score.noalias() += tr.activation * d_energy;
    const MatrixXd d_pre = (params.attn_score * d_energy.transpose()).cwiseProduct(
        (1.0 - tr.activation.array().square()).matrix());
    const VectorXd d_query = d_pre.rowwise().sum();
    g.attn_state.noalias() += d_query * tr.state_prev.transpose();
    g.attn_bias += d_query;
    d_state_prev.noalias() += params.attn_state.transpose() * d_query;
    d_projected += d_pre;
    g.attn_coverage.noalias() += d_pre * tr.coverage_features.transpose();
    const MatrixXd d_features = params.attn_coverage.transpose() * d_pre;

    VectorXd d_coverage_prev = d_coverage;
    for (Index i = 0; i < K; ++i) {
      for (Index k = 0; k < cfg.coverage_kernel; ++k) {
        const Index j = i + k - half;
        if (j < 0 || j >= K) continue;
        g.coverage_kernel.col(k) += d_features.col(i) * tr.coverage_prev(j);
        d_coverage_prev(j) += d_features.col(i).dot(params.coverage_kernel.col(k));
      }
    }
    d_coverage = d_coverage_prev;
    d_state = d_state_prev;
  }

  // s0 = tanh(Winit mean + binit)
  const VectorXd d_init = d_state.cwiseProduct((1.0 - s0.array().square()).matrix());
  g.init_weight.noalias() += d_init * mean.transpose();
  g.init_bias += d_init;
  const VectorXd d_mean = params.init_weight.transpose() * d_init / static_cast<double>(K);
  d_ann.colwise() += d_mean;
  g.attn_annotation.noalias() += d_projected * ann.transpose();
  d_ann.noalias() += params.attn_annotation.transpose() * d_projected;

  MatrixXd d_output = std::move(d_ann);
  for (Index l = cfg.enc_layers - 1; l >= 0; --l) {
    const auto lu = static_cast<std::size_t>(l);
    MatrixXd d_input = bigru_backward(params.encoder[lu], enc.layers[lu], d_output, g.encoder[lu]);
    if (l == 0) break;
    if (enc.layers[lu].pooled) {
      d_output = MatrixXd::Zero(d_input.rows(), enc.layers[lu - 1].output.cols());
      for (Index j = 0; j < d_input.cols(); ++j) d_output.col(2 * j) = d_input.col(j);
    } else {
      d_output = std::move(d_input);
    }
  }
  return res;
}

long double example_logprob(const ModelParams& params, const TrainingExample& ex) {
  const Annotations ann = encode(params, ex.features);
  std::vector<Index> targets = ex.tokens;
  targets.push_back(Vocabulary::kEnd);
  long double sum = 0.0L;
  for (double lp : teacher_forced_logprobs(params, ann, targets)) sum += lp;
  return sum;
}

void check_finite(double loss) {
  if (!std::isfinite(loss)) {
    std::ostringstream msg;
    msg << "non-finite loss (" << loss << "); training diverged";
    throw RuntimeFailure(msg.str());
  }
}

}  // namespace

LossAndGradients loss_and_gradients(const ModelParams& params, std::span<const TrainingExample> batch,
                                    unsigned threads) {
  if (batch.empty()) throw ValidationError("empty batch");
  std::vector<ExampleResult> results(batch.size());
  parallel_for(batch.size(), threads, [&](std::size_t i) { results[i] = example_gradients(params, batch[i]); });

  LossAndGradients out;
  out.gradients = zero_params(params.config);
  auto total = flat(out.gradients);
  long double logprob = 0.0L;
  for (auto& r : results) {
    logprob += r.logprob;
    out.token_count += r.tokens;
    auto part = flat(r.grad);
    for (std::size_t t = 0; t < total.size(); ++t) {
      for (std::size_t k = 0; k < total[t].size(); ++k) total[t][k] += part[t][k];
    }
  }
  const double scale = 1.0 / static_cast<double>(out.token_count);
  for (auto& t : total) {
    for (double& v : t) v *= scale;
  }
  out.loss = static_cast<double>(-logprob / static_cast<long double>(out.token_count));
  check_finite(out.loss);
  return out;
}

double mean_loss(const ModelParams& params, std::span<const TrainingExample> batch, unsigned threads) {
  if (batch.empty()) throw ValidationError("empty batch");
  std::vector<long double> logprob(batch.size());
  parallel_for(batch.size(), threads, [&](std::size_t i) { logprob[i] = example_logprob(params, batch[i]); });
  long double sum = 0.0L;
  Index tokens = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    sum += logprob[i];
    tokens += static_cast<Index>(batch[i].tokens.size()) + 1;
  }
  const double loss = static_cast<double>(-sum / static_cast<long double>(tokens));
  check_finite(loss);
  return loss;
}

double token_accuracy(const ModelParams& params, std::span<const TrainingExample> examples, Index max_decode_len,
                      unsigned threads) {
  std::vector<std::size_t> errors(examples.size());
  parallel_for(examples.size(), threads, [&](std::size_t i) {
    const auto decode = greedy_decode(params, encode(params, examples[i].features), max_decode_len);
    errors[i] = edit_distance(decode.tokens, examples[i].tokens);
  });
  std::size_t err = 0, len = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    err += errors[i];
    len += examples[i].tokens.size();
  }
  if (len == 0) return err == 0 ? 1.0 : 0.0;
  return std::max(0.0, 1.0 - static_cast<double>(err) / static_cast<double>(len));
}

namespace {

class Adam {
 public:
  Adam(const ArchConfig& cfg, double lr) : m_(zero_params(cfg)), v_(zero_params(cfg)), lr_(lr) {}

  void step(ModelParams& params, ModelParams& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    auto p = flat(params), g = flat(grad), m = flat(m_), v = flat(v_);
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t k = 0; k < p[i].size(); ++k) {
        const double gk = g[i][k];
        m[i][k] = kBeta1 * m[i][k] + (1.0 - kBeta1) * gk;
        v[i][k] = kBeta2 * v[i][k] + (1.0 - kBeta2) * gk * gk;
        p[i][k] -= lr_ * (m[i][k] / c1) / (std::sqrt(v[i][k] / c2) + kEps);
      }
    }
  }

 private:
  static constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  ModelParams m_, v_;
  double lr_;
  int t_ = 0;
};

void clip_global_norm(ModelParams& grad, double max_norm) {
  auto g = flat(grad);
  double sq = 0.0;
  for (auto& t : g) {
    for (double v : t) sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (norm <= max_norm) return;
  const double scale = max_norm / norm;
  for (auto& t : g) {
    for (double& v : t) v *= scale;
  }
}

}  // namespace

TrainResult train(const std::vector<RawInk>& dataset, ArchConfig arch, const TrainConfig& config,
                  std::uint64_t seed, const std::function<void(const EpochReport&)>& on_epoch) {
  if (dataset.empty()) throw ValidationError("training set is empty");
  if (config.batch_size < 1 || config.max_epochs < 1 || config.patience < 1) {
    throw ValidationError("batch_size, max_epochs and patience must be positive");
  }
  std::vector<std::vector<std::string>> labels;
  for (const auto& ink : dataset) {
    if (!ink.label || ink.label->empty()) throw ValidationError("sample '" + ink.id + "' has no label");
    labels.push_back(*ink.label);
  }

  TrainResult result;
  result.vocab = build_vocabulary(labels);
  arch.vocab_size = result.vocab.size();
  arch.validate();

  std::vector<TrainingExample> examples(dataset.size());
  parallel_for(dataset.size(), config.threads, [&](std::size_t i) {
    examples[i] = {preprocess(dataset[i], arch.spacing), result.vocab.encode(labels[i])};
  });

  std::vector<TrainingExample> train_set, heldout;
  if (examples.size() < 5) {
    train_set = examples;
    heldout = examples;
  } else {
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng split(derive_seed(seed, 1));
    split.shuffle(order.begin(), order.end());
    const auto n_held = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(config.heldout_fraction * static_cast<double>(examples.size()))), 1,
        examples.size() - 1);
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i < n_held ? heldout : train_set).push_back(examples[order[i]]);
    }
  }
  result.train_size = train_set.size();
  result.heldout_size = heldout.size();

  ModelParams params = init_params(arch, derive_seed(seed, 0));
  Adam adam(arch, config.learning_rate);
  result.params = params;
  double best_acc = -1.0, best_loss = 0.0;
  int since_best = 0;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    Rng shuffler(derive_seed(seed, 1000 + static_cast<std::uint64_t>(epoch)));
    shuffler.shuffle(order.begin(), order.end());
    long double weighted = 0.0L;
    Index tokens = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      std::vector<TrainingExample> batch;
      for (std::size_t i = start; i < end; ++i) batch.push_back(train_set[order[i]]);
      auto lg = loss_and_gradients(params, batch, config.threads);
      weighted += static_cast<long double>(lg.loss) * lg.token_count;
      tokens += lg.token_count;
      clip_global_norm(lg.gradients, config.clip_norm);
      adam.step(params, lg.gradients);
    }

    EpochReport report;
    report.epoch = epoch;
    report.train_loss = static_cast<double>(weighted / tokens);
    report.heldout_loss = mean_loss(params, heldout, config.threads);
    report.heldout_accuracy = token_accuracy(params, heldout, config.max_decode_len, config.threads);
    result.history.push_back(report);
    if (on_epoch) on_epoch(report);

    const bool better = report.heldout_accuracy > best_acc ||
                        (report.heldout_accuracy == best_acc && report.heldout_loss < best_loss);
    if (better) {
      best_acc = report.heldout_accuracy;
      best_loss = report.heldout_loss;
      result.params = params;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

}  // namespace gssf
