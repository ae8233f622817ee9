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

#include "gssf/metrics.hpp"

#include <cmath>
#include <map>

#include "gssf/error.hpp"

namespace gssf {
namespace {

// label -> category -> count, both ordered.
using Contingency = std::map<Index, std::map<std::string, Index>>;

Contingency tabulate(std::span<const Index> labels, std::span<const std::string> categories) {
  if (labels.size() != categories.size()) throw ValidationError("labels and categories differ in length");
  if (labels.empty()) throw ValidationError("cannot evaluate an empty clustering");
  Contingency table;
  for (std::size_t i = 0; i < labels.size(); ++i) ++table[labels[i]][categories[i]];
  return table;
}

std::vector<ClusterSummary> summarize(const Contingency& table) {
  std::vector<ClusterSummary> out;
  for (const auto& [label, counts] : table) {
    ClusterSummary s;
    s.label = label;
    for (const auto& [category, count] : counts) {
      s.size += count;
      if (count > s.majority_size) {
        s.majority_size = count;
        s.majority = category;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

double purity(std::span<const Index> labels, std::span<const std::string> categories) {
  Index majority = 0;
  for (const auto& s : summarize(tabulate(labels, categories))) majority += s.majority_size;
  return static_cast<double>(majority) / static_cast<double>(labels.size());
}

double marking_cost_raw(std::span<const Index> labels, std::span<const std::string> categories, double time_unit,
                        double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must be in (0, 1]");
  double cost = 0.0;
  for (const auto& s : summarize(tabulate(labels, categories))) {
    const auto size = static_cast<double>(s.size);
    cost += size * alpha * time_unit + (1.0 + size - static_cast<double>(s.majority_size)) * time_unit;
  }
  return cost;
}

double marking_cost(std::span<const Index> labels, std::span<const std::string> categories) {
  const auto table = tabulate(labels, categories);
  const auto k = static_cast<double>(table.size());
  const auto h = static_cast<double>(labels.size());
  return k / (2.0 * h) + 1.0 - purity(labels, categories) / 2.0;
}

Evaluation evaluate(std::span<const Index> labels, std::span<const std::string> categories) {
  Evaluation e;
  const auto table = tabulate(labels, categories);
  e.per_cluster = summarize(table);
  e.k = static_cast<Index>(table.size());
  e.h = static_cast<Index>(labels.size());
  std::map<std::string, int> distinct;
  for (const auto& c : categories) distinct[c] = 1;
  e.j = static_cast<Index>(distinct.size());
  e.purity = purity(labels, categories);
  e.mc = marking_cost(labels, categories);
  return e;
}

MeanSd mean_sd(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of an empty list");
  MeanSd out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(sq / static_cast<double>(values.size()));
  return out;
}

}  // namespace gssf
