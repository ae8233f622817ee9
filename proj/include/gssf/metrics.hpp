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

// Clustering quality for marking: purity and normalized marking cost.

#ifndef GSSF_METRICS_HPP_
#define GSSF_METRICS_HPP_

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

namespace gssf {

using Eigen::Index;

struct ClusterSummary {
  Index label = 0;
  Index size = 0;
  std::string majority;  // lexicographically smallest among tied categories
  Index majority_size = 0;
};

struct Evaluation {
  double purity = 0.0;
  double mc = 0.0;
  Index k = 0;  // clusters
  Index h = 0;  // samples
  Index j = 0;  // categories
  std::vector<ClusterSummary> per_cluster;
};

// (1/H) sum_k max_i |g_k ∩ c_i|.
double purity(std::span<const Index> labels, std::span<const std::string> categories);

// sum_k (|g_k| alpha T + (1 + |g_k| - |M_k|) T), in units of T.
double marking_cost_raw(std::span<const Index> labels, std::span<const std::string> categories, double time_unit,
                        double alpha);

// K / (2H) + 1 - purity / 2, i.e. the raw cost with alpha = 1 over 2HT.
double marking_cost(std::span<const Index> labels, std::span<const std::string> categories);

Evaluation evaluate(std::span<const Index> labels, std::span<const std::string> categories);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // population
};

MeanSd mean_sd(std::span<const double> values);

}  // namespace gssf

#endif  // GSSF_METRICS_HPP_
