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

// Reference implementations used as test oracles. Deliberately naive: they
// share no code with the library routines they check.

#ifndef GSSF_TESTS_ORACLES_HPP_
#define GSSF_TESTS_ORACLES_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gssf/seq2seq.hpp"
#include "gssf/train.hpp"

namespace oracle {

using Eigen::Index;

// Plain three-way recursion, no memo.
template <class T>
std::size_t edit_distance(const std::vector<T>& s, const std::vector<T>& t, std::size_t i = 0, std::size_t j = 0) {
  if (i == s.size()) return t.size() - j;
  if (j == t.size()) return s.size() - i;
  if (s[i] == t[j]) return edit_distance(s, t, i + 1, j + 1);
  return 1 + std::min({edit_distance(s, t, i + 1, j), edit_distance(s, t, i, j + 1),
                       edit_distance(s, t, i + 1, j + 1)});
}

// Relabels by first appearance so partitions compare with ==.
inline std::vector<Index> canonical(const std::vector<Index>& labels) {
  std::map<Index, Index> seen;
  std::vector<Index> out;
  for (Index l : labels) {
    auto it = seen.find(l);
    if (it == seen.end()) it = seen.emplace(l, static_cast<Index>(seen.size())).first;
    out.push_back(it->second);
  }
  return out;
}

struct Partition {
  std::vector<Index> labels;
  double objective = std::numeric_limits<double>::infinity();
};

inline double within_ss(const Eigen::MatrixXd& points, const std::vector<Index>& labels, Index k) {
  double total = 0.0;
  for (Index c = 0; c < k; ++c) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(points.cols());
    Index count = 0;
    for (Index i = 0; i < points.rows(); ++i) {
      if (labels[static_cast<std::size_t>(i)] == c) {
        mean += points.row(i);
        ++count;
      }
    }
    if (count == 0) return std::numeric_limits<double>::infinity();
    mean /= static_cast<double>(count);
    for (Index i = 0; i < points.rows(); ++i) {
      if (labels[static_cast<std::size_t>(i)] == c) total += (points.row(i) - mean).squaredNorm();
    }
  }
  return total;
}

// Minimum within-cluster sum of squares over every labelling into k
// non-empty groups.
inline Partition best_partition(const Eigen::MatrixXd& points, Index k) {
  const Index n = points.rows();
  Partition best;
  std::vector<Index> labels(static_cast<std::size_t>(n), 0);
  std::function<void(Index, Index)> rec = [&](Index i, Index used) {
    if (i == n) {
      if (used != k) return;
      const double obj = within_ss(points, labels, k);
      if (obj < best.objective) best = {labels, obj};
      return;
    }
    for (Index c = 0; c <= std::min(used, k - 1); ++c) {
      labels[static_cast<std::size_t>(i)] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  rec(0, 0);
  return best;
}

// Complete linkage by recomputing every cluster-pair distance from scratch
// after each merge. Ties merge the pair with the smallest (min member, min
// member) first.
inline std::vector<Index> complete_linkage(const Eigen::MatrixXd& d, Index k) {
  std::vector<std::vector<Index>> clusters;
  for (Index i = 0; i < d.rows(); ++i) clusters.push_back({i});
  while (static_cast<Index>(clusters.size()) > k) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    std::pair<Index, Index> best_key{0, 0};
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double link = 0.0;
        for (Index i : clusters[a]) {
          for (Index j : clusters[b]) link = std::max(link, d(i, j));
        }
        const Index ma = *std::min_element(clusters[a].begin(), clusters[a].end());
        const Index mb = *std::min_element(clusters[b].begin(), clusters[b].end());
        const std::pair<Index, Index> key{std::min(ma, mb), std::max(ma, mb)};
        if (link < best || (link == best && key < best_key)) {
          best = link;
          ba = a;
          bb = b;
          best_key = key;
        }
      }
    }
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
  }
  std::vector<Index> labels(static_cast<std::size_t>(d.rows()));
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (Index i : clusters[c]) labels[static_cast<std::size_t>(i)] = static_cast<Index>(c);
  }
  return canonical(labels);
}

// Per-cluster overlap with its best category.
inline std::vector<std::pair<Index, Index>> cluster_sizes_and_overlaps(const std::vector<Index>& labels,
                                                                       const std::vector<std::string>& cats) {
  std::map<Index, std::map<std::string, Index>> table;
  for (std::size_t i = 0; i < labels.size(); ++i) ++table[labels[i]][cats[i]];
  std::vector<std::pair<Index, Index>> out;
  for (const auto& [label, counts] : table) {
    Index size = 0, top = 0;
    for (const auto& [cat, count] : counts) {
      size += count;
      top = std::max(top, count);
    }
    out.emplace_back(size, top);
  }
  return out;
}

inline double purity(const std::vector<Index>& labels, const std::vector<std::string>& cats) {
  Index hit = 0;
  for (const auto& [size, top] : cluster_sizes_and_overlaps(labels, cats)) hit += top;
  return static_cast<double>(hit) / static_cast<double>(labels.size());
}

// Cost of marking cluster by cluster: every member's answer is read (alpha*T
// each), one representative is marked (T) and every non-majority member is
// marked individually (T each).
inline double marking_cost_raw(const std::vector<Index>& labels, const std::vector<std::string>& cats, double t,
                               double alpha) {
  double cost = 0.0;
  for (const auto& [size, top] : cluster_sizes_and_overlaps(labels, cats)) {
    cost += static_cast<double>(size) * alpha * t + (1.0 + static_cast<double>(size - top)) * t;
  }
  return cost;
}

struct GradientCheck {
  std::vector<std::pair<std::string, double>> per_tensor;  // worst relative error
  double worst = 0.0;
};

// Central differences of mean_loss against the analytic gradients.
inline GradientCheck finite_difference_check(const gssf::ModelParams& params,
                                             const std::vector<gssf::TrainingExample>& batch, double step = 1e-4) {
  const auto analytic = gssf::loss_and_gradients(params, batch);
  gssf::ModelParams probe = params;
  gssf::ModelParams grads = analytic.gradients;
  std::vector<std::pair<std::string, double*>> values;
  std::vector<const double*> derivs;
  std::vector<Index> sizes;
  probe.for_each_tensor([&](const std::string& name, auto& t) {
    values.emplace_back(name, t.data());
    sizes.push_back(t.size());
  });
  grads.for_each_tensor([&](const std::string&, auto& t) { derivs.push_back(t.data()); });

  GradientCheck out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double worst = 0.0;
    double* v = values[i].second;
    for (Index e = 0; e < sizes[i]; ++e) {
      const double orig = v[e];
      v[e] = orig + step;
      const double up = gssf::mean_loss(probe, batch);
      v[e] = orig - step;
      const double down = gssf::mean_loss(probe, batch);
      v[e] = orig;
      const double numeric = (up - down) / (2.0 * step);
      const double a = derivs[i][e];
      const double denom = std::max({std::abs(numeric), std::abs(a), 1e-8});
      worst = std::max(worst, std::abs(numeric - a) / denom);
    }
    out.per_tensor.emplace_back(values[i].first, worst);
    out.worst = std::max(out.worst, worst);
  }
  return out;
}

}  // namespace oracle

#endif  // GSSF_TESTS_ORACLES_HPP_
