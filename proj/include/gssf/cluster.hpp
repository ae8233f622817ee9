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

// Partitional and agglomerative clustering of SbR rows or distance matrices.

#ifndef GSSF_CLUSTER_HPP_
#define GSSF_CLUSTER_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gssf/rng.hpp"
#include "gssf/sbr.hpp"

namespace gssf {

enum class ClusterMethod {
  kClAbsGssf,        // m3: complete linkage over |GSSF|
  kClSbrEuclidean,   // m4: complete linkage over Euclidean distances of SbR rows
  kKMeansSbr,        // m5: k-means over SbR rows
};

ClusterMethod parse_cluster_method(std::string_view name);
std::string_view to_string(ClusterMethod method);

struct Assignment {
  std::vector<Index> labels;  // 0..k-1, numbered by first appearance
  Index k = 0;
  double objective = 0.0;  // k-means: sum of squared distances to centroids
  // k-means: objective after every Lloyd iteration of the winning restart.
  std::vector<double> objective_trace;
  int restart = 0;
};

// Symmetric, non-negative, zero-diagonal; checked on construction.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(Eigen::MatrixXd values);
  const Eigen::MatrixXd& values() const { return values_; }
  Index size() const { return values_.rows(); }
  double operator()(Index i, Index j) const { return values_(i, j); }

 private:
  Eigen::MatrixXd values_;
};

// Row indices chosen by k-means++ seeding over the rows of `points`. The
// first pick is uniform (or `first` when given); each further pick has
// probability proportional to the squared distance to the nearest pick so
// far, falling back to uniform over unpicked rows when all those distances
// are zero.
std::vector<Index> kmeans_pp_indices(const Eigen::MatrixXd& points, Index k, Rng& rng,
                                     std::optional<Index> first = std::nullopt);

// k x d centroid matrix of the k-means++ picks.
Eigen::MatrixXd kmeans_pp_init(const Eigen::MatrixXd& points, Index k, Rng& rng);

inline constexpr int kMaxLloydIterations = 300;

// Lloyd iterations from k-means++ seeds. Restart r is seeded with seed + r;
// the lowest objective wins, ties to the lowest restart. Assignment ties go
// to the lowest centroid index; an emptied cluster takes the point farthest
// from its centroid.
Assignment kmeans(const Eigen::MatrixXd& points, Index k, std::uint64_t seed, int restarts = 10,
                  unsigned threads = 1, int max_iterations = kMaxLloydIterations);

// Agglomerative clustering from singletons with the complete-linkage
// (maximum member distance) criterion. Clusters are identified by their
// smallest member; equal distances merge the lexicographically smallest
// pair first.
Assignment complete_linkage(const DistanceMatrix& distances, Index k);

// |values| of an unnormalized, symmetric GSSF-family matrix.
DistanceMatrix gssf_distance_matrix(const SbRMatrix& sbr);

// Pairwise Euclidean distances between rows.
DistanceMatrix euclidean_distance_matrix(const Eigen::MatrixXd& points);

// "id,cluster_label,category" rows; category may be empty.
void write_assignment_csv(std::ostream& out, const std::vector<std::string>& ids, const Assignment& assignment,
                          const std::vector<std::string>& categories);

}  // namespace gssf

#endif  // GSSF_CLUSTER_HPP_
