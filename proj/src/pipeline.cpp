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

#include "gssf/pipeline.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gssf/checkpoint.hpp"
#include "gssf/error.hpp"
#include "gssf/ink.hpp"
#include "gssf/metrics.hpp"
#include "gssf/parallel.hpp"
#include "gssf/synthgen.hpp"
#include "json.hpp"

namespace gssf {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- config

void PipelineConfig::validate() const {
  if (k && *k < 1) throw ValidationError("k must be positive");
  if (seeds.empty()) throw ValidationError("at least one clustering seed is required");
  if (restarts < 1) throw ValidationError("restarts must be positive");
  if (max_decode_len < 1) throw ValidationError("max_decode_len must be positive");
  if (method == ClusterMethod::kClAbsGssf && !(is_symmetric(kind) && is_gssf_family(kind))) {
    throw ValidationError("method cl_abs_gssf requires a symmetric GSSF-family kind, got " +
                          std::string(to_string(kind)));
  }
  if (compare_kinds.empty() || compare_methods.empty()) throw ValidationError("compare needs kinds and methods");
  if (!(train.heldout_fraction >= 0.0 && train.heldout_fraction < 1.0)) {
    throw ValidationError("heldout_fraction must lie in [0, 1)");
  }
}

namespace {

template <class T>
void read_if(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

ArchConfig parse_arch(const json& j, ArchConfig a) {
  read_if(j, "embed_dim", a.embed_dim);
  read_if(j, "enc_hidden", a.enc_hidden);
  read_if(j, "enc_layers", a.enc_layers);
  read_if(j, "pool_layers", a.pool_layers);
  read_if(j, "dec_hidden", a.dec_hidden);
  read_if(j, "attn_dim", a.attn_dim);
  read_if(j, "coverage_channels", a.coverage_channels);
  read_if(j, "coverage_kernel", a.coverage_kernel);
  read_if(j, "spacing", a.spacing);
  return a;
}

TrainConfig parse_train(const json& j, TrainConfig t) {
  read_if(j, "max_epochs", t.max_epochs);
  read_if(j, "patience", t.patience);
  read_if(j, "learning_rate", t.learning_rate);
  read_if(j, "clip_norm", t.clip_norm);
  read_if(j, "batch_size", t.batch_size);
  read_if(j, "heldout_fraction", t.heldout_fraction);
  read_if(j, "max_decode_len", t.max_decode_len);
  return t;
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& json_text) {
  PipelineConfig c;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    read_if(j, "spec", c.spec);
    read_if(j, "dataset", c.dataset);
    read_if(j, "checkpoint", c.checkpoint);
    read_if(j, "sbr", c.sbr);
    read_if(j, "out", c.out_dir);
    read_if(j, "output", c.output);
    if (j.contains("kind")) c.kind = parse_similarity_kind(j.at("kind").get<std::string>());
    if (j.contains("method")) c.method = parse_cluster_method(j.at("method").get<std::string>());
    if (j.contains("k")) {
      const auto& k = j.at("k");
      if (k.is_string()) {
        if (k.get<std::string>() != "categories") throw ValidationError("k must be an integer or \"categories\"");
        c.k.reset();
      } else {
        c.k = k.get<Index>();
      }
    }
    read_if(j, "seeds", c.seeds);
    if (j.contains("normalization")) {
      c.normalization = parse_normalization_mode(j.at("normalization").get<std::string>());
    }
    read_if(j, "restarts", c.restarts);
    read_if(j, "max_decode_len", c.max_decode_len);
    read_if(j, "threads", c.threads);
    read_if(j, "timings", c.timings);
    if (j.contains("compare")) {
      const auto& cmp = j.at("compare");
      if (cmp.contains("kinds")) {
        c.compare_kinds.clear();
        for (const auto& s : cmp.at("kinds")) c.compare_kinds.push_back(parse_similarity_kind(s.get<std::string>()));
      }
      if (cmp.contains("methods")) {
        c.compare_methods.clear();
        for (const auto& s : cmp.at("methods")) {
          c.compare_methods.push_back(parse_cluster_method(s.get<std::string>()));
        }
      }
    }
    if (j.contains("arch")) c.arch = parse_arch(j.at("arch"), c.arch);
    if (j.contains("train")) c.train = parse_train(j.at("train"), c.train);
    read_if(j, "train_seed", c.train_seed);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad config: ") + e.what());
  }
  return c;
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

PipelineConfig load_pipeline_config(const std::string& path) { return parse_pipeline_config(slurp(path)); }

void configure_logging() {
  auto logger = spdlog::get("gssf");
  if (!logger) logger = spdlog::stderr_color_mt("gssf");
  spdlog::set_default_logger(logger);
  spdlog::level::level_enum level = spdlog::level::err;
  if (const char* env = std::getenv("GSSF_LOG")) {
    const std::string v(env);
    if (v == "info") {
      level = spdlog::level::info;
    } else if (v == "debug") {
      level = spdlog::level::debug;
    } else if (v != "error") {
      throw ValidationError("GSSF_LOG must be error, info or debug");
    }
  }
  spdlog::set_level(level);
}

// ---------------------------------------------------------------- helpers

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeFailure("cannot create directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw RuntimeFailure("failed writing " + path);
}

std::vector<RawInk> load_dataset(const std::string& path) {
  if (path.empty()) throw ValidationError("no dataset given");
  auto inks = read_ink_jsonl(path);
  if (inks.empty()) throw ValidationError("dataset " + path + " is empty");
  std::sort(inks.begin(), inks.end(), [](const RawInk& a, const RawInk& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < inks.size(); ++i) {
    if (inks[i].id == inks[i - 1].id) throw ValidationError("duplicate answer id: " + inks[i].id);
  }
  return inks;
}

std::optional<std::vector<std::string>> categories_of(const std::vector<RawInk>& inks) {
  std::vector<std::string> cats;
  for (const auto& ink : inks) {
    if (!ink.category) return std::nullopt;
    cats.push_back(*ink.category);
  }
  return cats;
}

Index resolve_k(const PipelineConfig& config, const std::optional<std::vector<std::string>>& cats, Index n) {
  Index k = 0;
  if (config.k) {
    k = *config.k;
  } else {
    if (!cats) throw ValidationError("k = categories needs a category on every answer");
    k = static_cast<Index>(std::set<std::string>(cats->begin(), cats->end()).size());
  }
  if (k > n) throw ValidationError("k = " + std::to_string(k) + " exceeds the " + std::to_string(n) + " answers");
  return k;
}

std::vector<AnswerScoring> score_dataset(const ModelParams& params, const std::vector<RawInk>& inks,
                                         Index max_decode_len, unsigned threads) {
  std::vector<FeatureSequence> feats(inks.size());
  for (std::size_t i = 0; i < inks.size(); ++i) feats[i] = preprocess(inks[i], params.config.spacing);
  std::vector<AnswerScoring> answers(inks.size());
  parallel_for(inks.size(), threads,
               [&](std::size_t i) { answers[i] = score_answer(params, inks[i].id, feats[i], max_decode_len); });
  return answers;
}

// Scored answers plus the directional score matrix, computed once per dataset.
class ScoreCache {
 public:
  ScoreCache(const ModelParams& params, std::vector<AnswerScoring> answers, unsigned threads)
      : params_(params), answers_(std::move(answers)), threads_(threads) {}

  SbRMatrix raw(SimilarityKind kind) {
    if (!is_gssf_family(kind)) return build_sbr_matrix(answers_, kind, params_, threads_);
    if (answers_.size() < 2) throw ValidationError("a similarity matrix needs at least 2 answers");
    if (!conditional_) conditional_ = conditional_score_matrix(answers_, params_, threads_);
    return sbr_from_conditional(*conditional_, answers_, kind);
  }

  const std::vector<AnswerScoring>& answers() const { return answers_; }

 private:
  const ModelParams& params_;
  std::vector<AnswerScoring> answers_;
  unsigned threads_;
  std::optional<Eigen::MatrixXd> conditional_;
};

json summary_json(const Evaluation& e) {
  json per = json::array();
  for (const auto& c : e.per_cluster) {
    per.push_back({{"label", c.label}, {"size", c.size}, {"majority", c.majority}, {"majority_size", c.majority_size}});
  }
  return per;
}

// ---------------------------------------------------------------- output checks

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw RuntimeFailure("output " + path + " failed validation: " + what);
}

void require_keys(const json& j, std::initializer_list<const char*> keys, const std::string& path) {
  for (const char* key : keys) {
    if (!j.contains(key)) schema_fail(path, std::string("missing key ") + key);
  }
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

void check_csv(const std::string& path, const std::vector<std::string>& header, std::size_t rows) {
  const auto table = read_csv_rows(path);
  if (table.size() != rows + 1) schema_fail(path, "expected " + std::to_string(rows) + " data rows");
  if (table[0] != header) schema_fail(path, "unexpected header");
  for (const auto& r : table) {
    if (r.size() != header.size()) schema_fail(path, "ragged row");
  }
}

void check_cluster_report(const std::string& path, Index n, Index k) {
  const json j = json::parse(slurp(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) schema_fail(path, "not a JSON object");
  require_keys(j, {"purity", "mc", "k", "h", "j", "per_cluster", "similarity_kind", "method", "seeds", "runs",
                   "summary", "wall_times"},
               path);
  if (j["k"] != k || j["h"] != n) schema_fail(path, "k/h mismatch");
  if (!j["seeds"].is_array() || j["runs"].size() != j["seeds"].size()) schema_fail(path, "runs/seeds mismatch");
  if (!j["purity"].is_null()) {
    const double p = j["purity"].get<double>();
    const double mc = j["mc"].get<double>();
    if (!(p > 0.0 && p <= 1.0) || !(mc > 0.0 && mc <= 1.0 + 1e-12)) schema_fail(path, "purity/mc out of range");
    if (static_cast<Index>(j["per_cluster"].size()) != k) schema_fail(path, "per_cluster size");
  }
}

void check_assignment(const std::string& path, std::size_t n, Index k) {
  check_csv(path, {"id", "cluster_label", "category"}, n);
  const auto rows = read_csv_rows(path);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    Index label = -1;
    const auto& s = rows[i][1];
    const auto res = std::from_chars(s.data(), s.data() + s.size(), label);
    if (res.ec != std::errc{} || label < 0 || label >= k) schema_fail(path, "bad cluster label");
  }
}

void check_sbr(const std::string& path, Index n, bool normalized) {
  std::ifstream in(path);
  const SbRMatrix m = read_sbr_csv(in);
  if (m.size() != n) schema_fail(path, "matrix size");
  if (normalized && !m.normalized) schema_fail(path, "values outside [0, 1]");
}

void check_pgm(const std::string& path, Index n) {
  const std::string bytes = slurp(path);
  const std::string header = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  if (bytes.compare(0, header.size(), header) != 0) schema_fail(path, "bad PGM header");
  if (bytes.size() != header.size() + static_cast<std::size_t>(n * n)) schema_fail(path, "bad PGM size");
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

std::string out_path(const PipelineConfig& c, const std::string& name) { return (fs::path(c.out_dir) / name).string(); }

}  // namespace

// ---------------------------------------------------------------- clustering

std::vector<ClusterRun> cluster_matrix(const SbRMatrix& raw, ClusterMethod method, Index k,
                                       const std::vector<std::uint64_t>& seeds, NormalizationMode mode,
                                       int restarts, unsigned threads) {
  std::vector<ClusterRun> runs;
  if (method == ClusterMethod::kClAbsGssf) {
    const Assignment a = complete_linkage(gssf_distance_matrix(raw), k);
    for (auto s : seeds) runs.push_back({s, a});
    return runs;
  }
  const SbRMatrix norm = normalize_unit_interval(raw, mode);
  if (method == ClusterMethod::kClSbrEuclidean) {
    const Assignment a = complete_linkage(euclidean_distance_matrix(norm.values), k);
    for (auto s : seeds) runs.push_back({s, a});
    return runs;
  }
  for (auto s : seeds) runs.push_back({s, kmeans(norm.values, k, s, restarts, threads)});
  return runs;
}

// ---------------------------------------------------------------- commands

int run_synth(const PipelineConfig& config) {
  AnswerSetSpec spec;
  if (config.spec == "builtin:benchmark") {
    spec = benchmark_spec();
  } else if (config.spec == "builtin:benchmark-train") {
    spec = benchmark_training_spec();
  } else if (config.spec.empty()) {
    throw ValidationError("synth needs --spec");
  } else {
    spec = parse_answer_set_spec(slurp(config.spec));
  }
  if (config.synth_seed) spec.seed = *config.synth_seed;
  const std::string path = config.output.empty() ? out_path(config, "answers.jsonl") : config.output;
  if (config.output.empty()) ensure_dir(config.out_dir);
  const auto samples = generate_answer_set(spec);
  write_ink_jsonl(path, samples);
  Index expected = 0;
  for (const auto& c : spec.categories) expected += c.count;
  if (static_cast<Index>(read_ink_jsonl(path).size()) != expected) schema_fail(path, "sample count");
  spdlog::info("wrote {} samples to {}", samples.size(), path);
  return 0;
}

int run_train(const PipelineConfig& config, std::ostream& epochs_out) {
  config.validate();
  const auto inks = load_dataset(config.dataset);
  TrainConfig tc = config.train;
  tc.threads = resolve_threads(config.threads);
  const std::string path = config.output.empty() ? out_path(config, "model.ckpt") : config.output;
  if (config.output.empty()) ensure_dir(config.out_dir);

  const auto result = train(inks, config.arch, tc, config.train_seed, [&](const EpochReport& r) {
    epochs_out << json{{"epoch", r.epoch},
                       {"train_loss", r.train_loss},
                       {"heldout_loss", r.heldout_loss},
                       {"heldout_accuracy", r.heldout_accuracy}}
                      .dump()
               << std::endl;
    spdlog::debug("epoch {} loss {}", r.epoch, r.train_loss);
  });
  save_checkpoint(path, Checkpoint{result.vocab, result.params});
  const Checkpoint back = load_checkpoint(path);
  if (back.vocab.tokens() != result.vocab.tokens()) schema_fail(path, "vocabulary round trip");

  const auto& best = result.history[static_cast<std::size_t>(result.best_epoch - 1)];
  epochs_out << json{{"best_epoch", result.best_epoch},
                     {"heldout_accuracy", best.heldout_accuracy},
                     {"heldout_loss", best.heldout_loss},
                     {"train_size", result.train_size},
                     {"heldout_size", result.heldout_size},
                     {"checkpoint", path}}
                    .dump()
             << std::endl;
  return 0;
}

int run_cluster(const PipelineConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  const unsigned threads = resolve_threads(config.threads);
  const auto inks = load_dataset(config.dataset);
  const auto cats = categories_of(inks);
  const auto n = static_cast<Index>(inks.size());
  const Index k = resolve_k(config, cats, n);
  if (config.checkpoint.empty()) throw ValidationError("no checkpoint given");
  const Checkpoint ckpt = load_checkpoint(config.checkpoint);

  ScoreCache cache(ckpt.params, score_dataset(ckpt.params, inks, config.max_decode_len, threads), threads);
  const SbRMatrix raw = cache.raw(config.kind);
  const SbRMatrix norm = normalize_unit_interval(raw, config.normalization);
  const double score_time = seconds_since(t0);
  const auto t1 = Clock::now();
  const auto runs =
      cluster_matrix(raw, config.method, k, config.seeds, config.normalization, config.restarts, threads);
  const double cluster_time = seconds_since(t1);

  std::size_t unscorable = 0;
  for (bool b : raw.unscorable) unscorable += b ? 1 : 0;
  if (unscorable > 0) spdlog::info("{} answers decoded to nothing", unscorable);

  json report;
  json run_list = json::array();
  std::vector<double> purities, mcs;
  std::optional<Evaluation> first;
  for (const auto& r : runs) {
    json row{{"seed", r.seed}, {"objective", r.assignment.objective}, {"restart", r.assignment.restart}};
    if (cats) {
      const Evaluation e = evaluate(r.assignment.labels, *cats);
      row["purity"] = e.purity;
      row["mc"] = e.mc;
      purities.push_back(e.purity);
      mcs.push_back(e.mc);
      if (!first) first = e;
    }
    run_list.push_back(std::move(row));
  }
  report["similarity_kind"] = to_string(config.kind);
  report["method"] = to_string(config.method);
  report["normalization"] = to_string(config.normalization);
  report["k"] = k;
  report["h"] = n;
  report["seeds"] = config.seeds;
  report["unscorable"] = unscorable;
  report["degenerate"] = norm.degenerate;
  if (first) {
    report["purity"] = first->purity;
    report["mc"] = first->mc;
    report["j"] = first->j;
    report["per_cluster"] = summary_json(*first);
    const MeanSd p = mean_sd(purities), m = mean_sd(mcs);
    report["summary"] = {{"purity", {{"mean", p.mean}, {"sd", p.sd}}}, {"mc", {{"mean", m.mean}, {"sd", m.sd}}}};
  } else {
    report["purity"] = report["mc"] = report["j"] = report["per_cluster"] = report["summary"] = nullptr;
  }
  report["runs"] = std::move(run_list);
  report["wall_times"] = config.timings ? json{{"scoring_s", score_time}, {"clustering_s", cluster_time},
                                               {"total_s", seconds_since(t0)}}
                                        : json(nullptr);

  ensure_dir(config.out_dir);
  const std::vector<std::string> ids = raw.ids;
  const std::string report_path = out_path(config, "report.json");
  const std::string assign_path = out_path(config, "assignment.csv");
  const std::string raw_path = out_path(config, "sbr_raw.csv");
  const std::string norm_path = out_path(config, "sbr.csv");
  const std::string pgm_path = out_path(config, "heatmap.pgm");
  write_text(report_path, report.dump(2) + "\n");
  {
    auto out = open_out(assign_path);
    write_assignment_csv(out, ids, runs.front().assignment, cats ? *cats : std::vector<std::string>{});
    finish(out, assign_path);
  }
  {
    auto out = open_out(raw_path);
    write_sbr_csv(out, raw);
    finish(out, raw_path);
  }
  {
    auto out = open_out(norm_path);
    write_sbr_csv(out, norm);
    finish(out, norm_path);
  }
  {
    auto out = open_out(pgm_path);
    write_heatmap_pgm(out, norm);
    finish(out, pgm_path);
  }

  check_cluster_report(report_path, n, k);
  check_assignment(assign_path, inks.size(), k);
  check_sbr(raw_path, n, false);
  check_sbr(norm_path, n, true);
  check_pgm(pgm_path, n);
  spdlog::info("clustered {} answers into {} groups", n, k);
  return 0;
}

int run_compare(const PipelineConfig& config) {
  config.validate();
  const unsigned threads = resolve_threads(config.threads);
  const auto inks = load_dataset(config.dataset);
  const auto cats = categories_of(inks);
  if (!cats) throw ValidationError("compare needs a category on every answer");
  const auto n = static_cast<Index>(inks.size());
  const Index k = resolve_k(config, cats, n);
  if (config.checkpoint.empty()) throw ValidationError("no checkpoint given");
  const Checkpoint ckpt = load_checkpoint(config.checkpoint);
  ScoreCache cache(ckpt.params, score_dataset(ckpt.params, inks, config.max_decode_len, threads), threads);

  json rows = json::array(), summary = json::array(), skipped = json::array();
  std::ostringstream csv, summary_csv;
  csv << "kind,method,seed,purity,mc\n";
  summary_csv << "kind,method,purity_mean,purity_sd,mc_mean,mc_sd\n";
  for (const SimilarityKind kind : config.compare_kinds) {
    const SbRMatrix raw = cache.raw(kind);
    for (const ClusterMethod method : config.compare_methods) {
      if (method == ClusterMethod::kClAbsGssf && !(is_symmetric(kind) && is_gssf_family(kind))) {
        skipped.push_back({{"kind", to_string(kind)}, {"method", to_string(method)}, {"reason", "incompatible"}});
        continue;
      }
      const auto runs = cluster_matrix(raw, method, k, config.seeds, config.normalization, config.restarts, threads);
      std::vector<double> purities, mcs;
      for (const auto& r : runs) {
        const Evaluation e = evaluate(r.assignment.labels, *cats);
        purities.push_back(e.purity);
        mcs.push_back(e.mc);
        rows.push_back({{"kind", to_string(kind)},
                        {"method", to_string(method)},
                        {"seed", r.seed},
                        {"purity", e.purity},
                        {"mc", e.mc}});
        csv << to_string(kind) << ',' << to_string(method) << ',' << r.seed << ',' << fmt_real(e.purity) << ','
            << fmt_real(e.mc) << '\n';
      }
      const MeanSd p = mean_sd(purities), m = mean_sd(mcs);
      summary.push_back({{"kind", to_string(kind)},
                         {"method", to_string(method)},
                         {"purity_mean", p.mean},
                         {"purity_sd", p.sd},
                         {"mc_mean", m.mean},
                         {"mc_sd", m.sd}});
      summary_csv << to_string(kind) << ',' << to_string(method) << ',' << fmt_real(p.mean) << ','
                  << fmt_real(p.sd) << ',' << fmt_real(m.mean) << ',' << fmt_real(m.sd) << '\n';
    }
  }

  ensure_dir(config.out_dir);
  const json table{{"k", k}, {"h", n}, {"seeds", config.seeds}, {"rows", rows}, {"summary", summary},
                   {"skipped", skipped}};
  const std::string json_path = out_path(config, "compare.json");
  const std::string csv_path = out_path(config, "compare.csv");
  const std::string summary_path = out_path(config, "compare_summary.csv");
  write_text(json_path, table.dump(2) + "\n");
  write_text(csv_path, csv.str());
  write_text(summary_path, summary_csv.str());

  const json back = json::parse(slurp(json_path), nullptr, false);
  if (back.is_discarded()) schema_fail(json_path, "not JSON");
  require_keys(back, {"rows", "summary", "seeds", "k", "h"}, json_path);
  check_csv(csv_path, {"kind", "method", "seed", "purity", "mc"}, rows.size());
  check_csv(summary_path, {"kind", "method", "purity_mean", "purity_sd", "mc_mean", "mc_sd"}, summary.size());
  return 0;
}

int run_heatmap(const PipelineConfig& config) {
  if (config.sbr.empty()) throw ValidationError("heatmap needs --sbr");
  std::ifstream in(config.sbr);
  if (!in) throw ValidationError("cannot open " + config.sbr);
  SbRMatrix m = read_sbr_csv(in);
  if (!m.normalized) m = normalize_unit_interval(m, config.normalization);
  const std::string path = config.output.empty() ? out_path(config, "heatmap.pgm") : config.output;
  if (config.output.empty()) ensure_dir(config.out_dir);
  auto out = open_out(path);
  write_heatmap_pgm(out, m);
  finish(out, path);
  check_pgm(path, m.size());
  return 0;
}

}  // namespace gssf
