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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Criteria 1 and 8-10 share one trained recognizer.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fixtures.hpp"
#include "gssf/checkpoint.hpp"
#include "gssf/cluster.hpp"
#include "gssf/edit_distance.hpp"
#include "gssf/ink.hpp"
#include "gssf/metrics.hpp"
#include "gssf/sbr.hpp"
#include "gssf/similarity.hpp"
#include "json.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using gssf::Index;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

fs::path workspace;

std::string at(const std::string& name) { return (workspace / name).string(); }

int run(const std::string& args, const std::string& log) {
  const std::string cmd = std::string(GSSF_BIN) + " " + args + " >" + at(log) + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---------------------------------------------------------------- criteria

Outcome hand_oracle() {
  const auto t = fixture::two_step();
  const double f = gssf::conditional_score(t.a, t.b, t.params);
  const double want = std::log(0.125 / 0.72);
  return {std::abs(f - want) < 1e-9, fmt("F = %.12f, ln(0.125/0.72) = %.12f", f, want)};
}

Outcome gradient_check() {
  const auto params = gssf::init_params(fixture::tiny_arch(), 7);
  const auto check = oracle::finite_difference_check(params, fixture::tiny_batch(3));
  std::string worst_name;
  for (const auto& [name, err] : check.per_tensor) {
    if (err == check.worst) worst_name = name;
  }
  return {check.per_tensor.size() == 26 && check.worst < 1e-4,
          fmt("%.0f tensors, worst relative error %.3g", static_cast<double>(check.per_tensor.size()), check.worst) +
              " (" + worst_name + ")"};
}

Outcome uniform_law() {
  int bad = 0;
  gssf::Rng rng(5);
  for (Index v = 3; v <= 12; ++v) {
    auto arch = fixture::tiny_arch();
    arch.vocab_size = v;
    const auto params = gssf::zero_params(arch);
    std::vector<gssf::TrainingExample> batch;
    for (int i = 0; i < 16; ++i) {
      std::vector<Index> tokens(1 + rng.below(6));
      for (auto& t : tokens) t = 2 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(v - 2)));
      batch.push_back({fixture::random_features(rng, 3 + static_cast<Index>(rng.below(20))), tokens});
      const auto ann = gssf::encode(params, batch.back().features);
      for (double lp : gssf::teacher_forced_logprobs(params, ann, tokens)) {
        if (lp != -std::log(static_cast<double>(v))) ++bad;
      }
    }
    if (gssf::loss_and_gradients(params, batch).loss != std::log(static_cast<double>(v))) ++bad;
  }
  return {bad == 0, fmt("V = 3..12, %.0f inexact values", bad)};
}

Outcome edit_distance_suite() {
  gssf::Rng rng(2026);
  auto draw = [&] {
    std::vector<std::string> s(rng.below(7));
    for (auto& x : s) x = std::string(1, static_cast<char>('a' + rng.below(4)));
    return s;
  };
  int mismatches = 0, axiom_failures = 0;
  for (int i = 0; i < 500; ++i) {
    const auto s = draw(), t = draw(), u = draw();
    const auto st = gssf::edit_distance(s, t);
    if (st != oracle::edit_distance(s, t)) ++mismatches;
    if ((st == 0) != (s == t)) ++axiom_failures;
    if (st != gssf::edit_distance(t, s)) ++axiom_failures;
    if (gssf::edit_distance(s, u) > st + gssf::edit_distance(t, u)) ++axiom_failures;
    if (gssf::edit_distance(s, s) != 0) ++axiom_failures;
  }
  return {mismatches == 0 && axiom_failures == 0,
          fmt("500 pairs, %.0f oracle mismatches, %.0f axiom failures", mismatches, axiom_failures)};
}

Outcome metrics_identities() {
  gssf::Rng rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index h = 1 + static_cast<Index>(rng.below(60));
    const Index k = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(h)));
    std::vector<Index> labels;
    std::vector<std::string> cats;
    for (Index i = 0; i < h; ++i) {
      labels.push_back(static_cast<Index>(rng.below(static_cast<std::uint64_t>(k))));
      cats.push_back("c" + std::to_string(rng.below(5)));
    }
    const double per_sample = oracle::marking_cost_raw(labels, cats, 1.0, 1.0) / (2.0 * static_cast<double>(h));
    worst = std::max(worst, std::abs(gssf::marking_cost(labels, cats) - per_sample));
  }
  bool worst_case = true;
  for (Index h = 1; h <= 200; ++h) {
    std::vector<Index> labels;
    std::vector<std::string> cats;
    for (Index i = 0; i < h; ++i) {
      labels.push_back(i);
      cats.push_back("c" + std::to_string(i % 3));
    }
    worst_case = worst_case && gssf::marking_cost(labels, cats) == 1.0;
  }
  const std::vector<Index> fl{0, 0, 0, 1, 1, 1};
  const std::vector<std::string> fc{"a", "a", "b", "b", "b", "b"};
  const double p = gssf::purity(fl, fc), mc = gssf::marking_cost(fl, fc);
  const bool fixture_ok = p == 5.0 / 6.0 && std::abs(mc - 0.75) < 1e-12;
  return {worst < 1e-12 && worst_case && fixture_ok,
          fmt("1000 labelings, max |closed form - raw cost / 2H| = %.3g; fixture purity %.15f, MC %.15f", worst, p, mc) +
              (worst_case ? "; K=H gives MC 1.0 for H=1..200" : "; K=H does not give MC 1.0")};
}

Outcome clustering_oracles() {
  Eigen::MatrixXd four(4, 2);
  four << 0, 0, 0, 1, 10, 0, 10, 1;
  const auto brute = oracle::best_partition(four, 2);
  const auto km = gssf::kmeans(four, 2, 0);
  const bool fixture_ok = km.labels == oracle::canonical(brute.labels) && std::abs(km.objective - 1.0) < 1e-12 &&
                          std::abs(brute.objective - 1.0) < 1e-12;

  // Every Lloyd run is logged when restarts = 1.
  int runs = 0, increases = 0;
  gssf::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 10 + static_cast<Index>(rng.below(50));
    Eigen::MatrixXd p(n, 3);
    for (Index i = 0; i < n; ++i) {
      for (Index c = 0; c < 3; ++c) p(i, c) = rng.normal() + static_cast<double>(i % 3);
    }
    const Index k = 1 + static_cast<Index>(rng.below(6));
    const auto a = gssf::kmeans(p, k, static_cast<std::uint64_t>(trial), 1);
    ++runs;
    for (std::size_t t = 1; t < a.objective_trace.size(); ++t) {
      if (a.objective_trace[t] > a.objective_trace[t - 1]) ++increases;
    }
  }

  int cl_mismatch = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(8));
    const Index k = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = rng.uniform(0.0, 1.0);
    }
    if (gssf::complete_linkage(gssf::DistanceMatrix(d), k).labels != oracle::complete_linkage(d, k)) ++cl_mismatch;
  }
  return {fixture_ok && increases == 0 && cl_mismatch == 0,
          fmt("4-point objective %.6f (brute force %.6f); %.0f Lloyd runs with %.0f increases; ", km.objective,
              brute.objective, runs, increases) +
              fmt("complete linkage mismatches %.0f/200", cl_mismatch)};
}

// ---------------------------------------------------------------- trained pipeline

struct Trained {
  bool ok = false;
  double seconds = 0.0;
  double heldout_accuracy = 0.0;
  int best_epoch = 0;
  std::string checkpoint, dataset, train_set;
  std::string error;
};

// With `reuse`, a model left in the workspace by an earlier --prepare run is
// picked up together with its recorded training time.
Trained train_recognizer(bool reuse) {
  Trained t;
  t.dataset = at("benchmark.jsonl");
  t.train_set = at("benchmark_train.jsonl");
  t.checkpoint = at("model.ckpt");
  const std::string summary_path = at("train_summary.json");
  if (reuse && fs::exists(summary_path) && fs::exists(t.checkpoint)) {
    const json j = json::parse(slurp(summary_path));
    t.seconds = j["seconds"].get<double>();
    t.heldout_accuracy = j["heldout_accuracy"].get<double>();
    t.best_epoch = j["best_epoch"].get<int>();
    t.ok = true;
    return t;
  }
  if (run("synth --spec builtin:benchmark --output " + t.dataset, "synth.log") != 0 ||
      run("synth --spec builtin:benchmark-train --output " + t.train_set, "synth_train.log") != 0) {
    t.error = "synth failed: " + slurp(at("synth.log"));
    return t;
  }
  const auto t0 = Clock::now();
  const int rc = run("train --dataset " + t.train_set + " --output " + t.checkpoint + " --seed 7", "train.log");
  t.seconds = elapsed(t0);
  if (rc != 0) {
    t.error = "train exited " + std::to_string(rc);
    return t;
  }
  std::istringstream lines(slurp(at("train.log")));
  std::string line, last;
  while (std::getline(lines, line)) {
    if (!line.empty()) last = line;
  }
  const json summary = json::parse(last);
  t.heldout_accuracy = summary["heldout_accuracy"].get<double>();
  t.best_epoch = summary["best_epoch"].get<int>();
  t.ok = true;
  std::ofstream(summary_path) << json{{"seconds", t.seconds},
                                      {"heldout_accuracy", t.heldout_accuracy},
                                      {"best_epoch", t.best_epoch}}
                                     .dump()
                              << "\n";
  return t;
}

std::vector<gssf::AnswerScoring> score_benchmark(const gssf::ModelParams& params, const std::string& dataset) {
  auto inks = gssf::read_ink_jsonl(dataset);
  std::vector<gssf::AnswerScoring> out;
  for (const auto& ink : inks) {
    out.push_back(gssf::score_answer(params, ink.id, gssf::preprocess(ink, params.config.spacing), 32));
  }
  return out;
}

Outcome gssf_identities(const Trained& t) {
  if (!t.ok) return {false, "no trained model: " + t.error};
  const auto ck = gssf::load_checkpoint(t.checkpoint);
  const auto answers = score_benchmark(ck.params, t.dataset);
  gssf::Rng rng(99);
  int pairs = 0, asym = 0, order = 0, self = 0, skipped = 0;
  for (const auto& a : answers) {
    if (!a.scorable()) continue;
    if (gssf::gssf(a, a, ck.params) != 0.0) ++self;
  }
  while (pairs < 1000) {
    const auto& a = answers[rng.below(answers.size())];
    const auto& b = answers[rng.below(answers.size())];
    if (!a.scorable() || !b.scorable()) {
      ++skipped;
      continue;
    }
    const double g = gssf::gssf(a, b, ck.params);
    if (g != gssf::gssf(b, a, ck.params)) ++asym;
    const double lo = gssf::variant_score(gssf::SimilarityKind::kMin, a, b, ck.params);
    const double hi = gssf::variant_score(gssf::SimilarityKind::kMax, a, b, ck.params);
    if (!(lo <= g && g <= hi)) ++order;
    ++pairs;
  }
  return {asym == 0 && order == 0 && self == 0 && skipped == 0,
          fmt("%.0f pairs: %.0f asymmetric, %.0f order violations, ", pairs, asym, order) +
              fmt("%.0f nonzero self scores, %.0f unscorable draws", self, skipped)};
}

std::map<std::string, std::string> categories_by_id(const std::string& dataset) {
  std::map<std::string, std::string> out;
  for (const auto& ink : gssf::read_ink_jsonl(dataset)) out[ink.id] = ink.category.value_or("");
  return out;
}

Outcome end_to_end(const Trained& t) {
  if (!t.ok) return {false, "no trained model: " + t.error};
  const auto t0 = Clock::now();
  const int rc = run("cluster --dataset " + t.dataset + " --checkpoint " + t.checkpoint +
                         " --kind gssf --method m5 --k 5 --out " + at("m5"),
                     "cluster.log");
  const double cluster_secs = elapsed(t0);
  if (rc != 0) return {false, "cluster exited " + std::to_string(rc) + ": " + slurp(at("cluster.log"))};
  const json r = json::parse(slurp(at("m5/report.json")));
  const double purity = r["summary"]["purity"]["mean"].get<double>();
  const double mc = r["summary"]["mc"]["mean"].get<double>();

  // Same-category pairs should look more alike than cross-category ones.
  std::ifstream raw(at("m5/sbr_raw.csv"));
  const auto m = gssf::read_sbr_csv(raw);
  const auto cats = categories_by_id(t.dataset);
  double intra = 0.0, inter = 0.0;
  Index n_intra = 0, n_inter = 0;
  for (Index i = 0; i < m.size(); ++i) {
    for (Index j = 0; j < m.size(); ++j) {
      if (i == j) continue;
      if (cats.at(m.ids[static_cast<std::size_t>(i)]) == cats.at(m.ids[static_cast<std::size_t>(j)])) {
        intra += m.values(i, j);
        ++n_intra;
      } else {
        inter += m.values(i, j);
        ++n_inter;
      }
    }
  }
  intra /= static_cast<double>(n_intra);
  inter /= static_cast<double>(n_inter);

  const bool pass = t.heldout_accuracy >= 0.90 && t.seconds <= 600.0 && purity >= 0.90 && mc <= 0.60 &&
                    cluster_secs <= 120.0 && r["seeds"].size() == 3 && intra > inter;
  return {pass, fmt("held-out accuracy %.4f (best epoch %.0f), training %.1fs; ", t.heldout_accuracy, t.best_epoch,
                    t.seconds) +
                    fmt("purity %.4f, MC %.4f over 3 seeds, clustering %.1fs; ", purity, mc, cluster_secs) +
                    fmt("mean GSSF intra %.3f vs inter %.3f", intra, inter)};
}

Outcome variant_ordering(const Trained& t) {
  if (!t.ok) return {false, "no trained model: " + t.error};
  const auto t0 = Clock::now();
  const int rc = run("compare --dataset " + t.dataset + " --checkpoint " + t.checkpoint + " --k 5 --out " +
                         at("compare"),
                     "compare.log");
  const double secs = elapsed(t0);
  if (rc != 0) return {false, "compare exited " + std::to_string(rc)};
  const json table = json::parse(slurp(at("compare/compare.json")));
  std::map<std::string, double> mean;
  for (const auto& row : table["summary"]) mean[row["kind"].get<std::string>()] = row["purity_mean"].get<double>();
  const double best_variant = std::max({mean.at("min"), mean.at("max"), mean.at("asymmetric")});
  const bool pass = table["rows"].size() == 15 && mean.at("gssf") >= mean.at("neg_edit_distance") &&
                    mean.at("gssf") >= best_variant - 0.02 && secs <= 600.0;
  return {pass, fmt("mean purity gssf %.4f, edit %.4f, min %.4f, max %.4f", mean.at("gssf"),
                    mean.at("neg_edit_distance"), mean.at("min"), mean.at("max")) +
                    fmt(", asym %.4f; %.1fs", mean.at("asymmetric"), secs)};
}

Outcome determinism(const Trained& t) {
  if (!t.ok) return {false, "no trained model: " + t.error};
  const auto t0 = Clock::now();
  std::vector<std::string> dirs;
  int failed_runs = 0;
  for (const std::string threads : {"1", "1", "2", "4"}) {
    const std::string dir = at("det" + std::to_string(dirs.size()));
    dirs.push_back(dir);
    if (run("cluster --dataset " + t.dataset + " --checkpoint " + t.checkpoint + " --k categories --threads " +
                threads + " --out " + dir,
            "det.log") != 0) {
      ++failed_runs;
    }
  }
  int differing = 0;
  for (const char* f : {"report.json", "assignment.csv", "heatmap.pgm", "sbr.csv", "sbr_raw.csv"}) {
    const std::string first = slurp(dirs[0] + "/" + f);
    for (std::size_t d = 1; d < dirs.size(); ++d) {
      if (first.empty() || slurp(dirs[d] + "/" + f) != first) ++differing;
    }
  }

  // Short training runs: same seed at different thread counts.
  const std::string short_cfg = at("short.json");
  std::ofstream(short_cfg) << R"({"train": {"max_epochs": 3}})";
  int train_rc = 0;
  for (const std::string threads : {"1", "3"}) {
    train_rc += run("train --config " + short_cfg + " --dataset " + t.train_set + " --seed 11 --threads " + threads +
                        " --output " + at("short" + threads + ".ckpt"),
                    "short.log");
  }
  const bool ckpt_same = slurp(at("short1.ckpt")) == slurp(at("short3.ckpt")) && !slurp(at("short1.ckpt")).empty();
  const double secs = elapsed(t0);
  return {failed_runs == 0 && differing == 0 && train_rc == 0 && ckpt_same && secs <= 300.0,
          fmt("4 cluster runs at threads 1,1,2,4: %.0f failed, %.0f differing files; ", failed_runs, differing) +
              (ckpt_same ? "checkpoints identical at threads 1/3" : "checkpoints differ at threads 1/3") +
              fmt("; %.1fs", secs)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  std::string dir;
  bool prepare = false;
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--workdir", dir, "Keep artifacts here and reuse a prepared model");
  app.add_flag("--prepare", prepare, "Only synthesize data and train the recognizer");
  CLI11_PARSE(app, argc, argv);

  const bool keep = !dir.empty();
  workspace = keep ? fs::path(dir) : fs::temp_directory_path() / ("gssf_acceptance_" + std::to_string(::getpid()));
  if (!keep) fs::remove_all(workspace);
  fs::create_directories(workspace);
  std::printf("acceptance workspace: %s\n", workspace.c_str());

  if (prepare) {
    const Trained t = train_recognizer(false);
    std::printf("trained: %s\n", t.ok ? "ok" : t.error.c_str());
    return t.ok ? 0 : 1;
  }

  auto wanted = [&](int id) { return only == 0 || only == id; };
  if (wanted(2)) report(2, "hand-oracle F", hand_oracle);
  if (wanted(3)) report(3, "gradient check", gradient_check);
  if (wanted(4)) report(4, "uniform-model law", uniform_law);
  if (wanted(5)) report(5, "edit distance", edit_distance_suite);
  if (wanted(6)) report(6, "metrics identities", metrics_identities);
  if (wanted(7)) report(7, "clustering oracles", clustering_oracles);
  if (wanted(1) || wanted(8) || wanted(9) || wanted(10)) {
    const Trained trained = train_recognizer(keep);
    if (wanted(1)) report(1, "GSSF identities", [&] { return gssf_identities(trained); });
    if (wanted(8)) report(8, "end-to-end M5 benchmark", [&] { return end_to_end(trained); });
    if (wanted(9)) report(9, "variant/baseline ordering", [&] { return variant_ordering(trained); });
    if (wanted(10)) report(10, "determinism", [&] { return determinism(trained); });
  }
  std::printf("%d criterion failure(s)\n", failures);
  if (failures == 0 && !keep) fs::remove_all(workspace);
  return failures == 0 ? 0 : 1;
}
