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

#include "gssf/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "gssf/error.hpp"
#include "gssf/parallel.hpp"

namespace gssf {

ClusterMethod parse_cluster_method(std::string_view name) {
  if (name == "m3" || name == "cl_abs_gssf") return ClusterMethod::kClAbsGssf;
  if (name == "m4" || name == "cl_sbr_euclidean") return ClusterMethod::kClSbrEuclidean;
  if (name == "m5" || name == "kmeans_sbr") return ClusterMethod::kKMeansSbr;
  throw ValidationError("unknown clustering method: " + std::string(name));
}

std::string_view to_string(ClusterMethod method) {
  switch (method) {
    case ClusterMethod::kClAbsGssf:
      return "cl_abs_gssf";
    case ClusterMethod::kClSbrEuclidean:
      return "cl_sbr_euclidean";
    case ClusterMethod::kKMeansSbr:
      return "kmeans_sbr";
  }
  return "unknown";
}

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) throw ValidationError("distance matrix must be square");
  if (!values_.allFinite()) throw ValidationError("distance matrix has non-finite entries");
  for (Index i = 0; i < values_.rows(); ++i) {
    if (values_(i, i) != 0.0) throw ValidationError("distance matrix diagonal must be zero");
    for (Index j = 0; j < i; ++j) {
      if (values_(i, j) < 0.0) throw ValidationError("distances must be non-negative");
      if (values_(i, j) != values_(j, i)) throw ValidationError("distance matrix must be symmetric");
    }
  }
}

namespace {

void check_k(Index k, Index n) {
  if (k < 1 || k > n) {
    throw ValidationError("cluster count " + std::to_string(k) + " must be in [1, " + std::to_string(n) + "]");
  }
}

// Renumbers labels 0.. in order of first appearance.
std::vector<Index> canonical_labels(const std::vector<Index>& labels) {
  std::vector<Index> map;
  std::vector<Index> out(labels.size());
  Index max_label = 0;
  for (Index l : labels) max_label = std::max(max_label, l);
  map.assign(static_cast<std::size_t>(max_label + 1), -1);
  Index next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& m = map[static_cast<std::size_t>(labels[i])];
    if (m < 0) m = next++;
    out[i] = m;
  }
  return out;
}

}  // namespace

std::vector<Index> kmeans_pp_indices(const Eigen::MatrixXd& points, Index k, Rng& rng,
                                     std::optional<Index> first) {
  const Index n = points.rows();
  check_k(k, n);
  std::vector<Index> picks;
  std::vector<bool> picked(static_cast<std::size_t>(n), false);
  const Index start = first ? *first : static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  if (start < 0 || start >= n) throw ValidationError("first seed index out of range");
  picks.push_back(start);
  picked[static_cast<std::size_t>(start)] = true;

  Eigen::VectorXd nearest = (points.rowwise() - points.row(start)).rowwise().squaredNorm();
  while (static_cast<Index>(picks.size()) < k) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (!picked[static_cast<std::size_t>(i)]) total += nearest(i);
    }
    Index choice = -1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      for (Index i = 0; i < n; ++i) {
        if (picked[static_cast<std::size_t>(i)] || nearest(i) <= 0.0) continue;
        cumulative += nearest(i);
        choice = i;
        if (target < cumulative) break;
      }
    } else {
      std::vector<Index> open;
      for (Index i = 0; i < n; ++i) {
        if (!picked[static_cast<std::size_t>(i)]) open.push_back(i);
      }
      choice = open[static_cast<std::size_t>(rng.below(open.size()))];
    }
    picks.push_back(choice);
    picked[static_cast<std::size_t>(choice)] = true;
    nearest = nearest.cwiseMin((points.rowwise() - points.row(choice)).rowwise().squaredNorm());
  }
  return picks;
}

Eigen::MatrixXd kmeans_pp_init(const Eigen::MatrixXd& points, Index k, Rng& rng) {
  const auto picks = kmeans_pp_indices(points, k, rng);
  Eigen::MatrixXd centroids(k, points.cols());
  for (Index c = 0; c < k; ++c) centroids.row(c) = points.row(picks[static_cast<std::size_t>(c)]);
  return centroids;
}

namespace {

Assignment lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids, int max_iterations) {
  const Index n = points.rows(), k = centroids.rows();
  Assignment a;
  a.k = k;
  a.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<Index> next(static_cast<std::size_t>(n));
  for (int iter = 0; iter < max_iterations; ++iter) {
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      double best_d = (points.row(i) - centroids.row(0)).squaredNorm();
      for (Index c = 1; c < k; ++c) {
        const double d = (points.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      next[static_cast<std::size_t>(i)] = best;
    }
    if (next == a.labels) break;
    a.labels = next;

    std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
    for (Index l : a.labels) ++sizes[static_cast<std::size_t>(l)];
    for (Index c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) continue;
      Index far = -1;
      double far_d = -1.0;
      for (Index i = 0; i < n; ++i) {
        const Index l = a.labels[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(l)] < 2) continue;
        const double d = (points.row(i) - centroids.row(l)).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --sizes[static_cast<std::size_t>(a.labels[static_cast<std::size_t>(far)])];
      a.labels[static_cast<std::size_t>(far)] = c;
      sizes[static_cast<std::size_t>(c)] = 1;
    }

    centroids.setZero();
    for (Index i = 0; i < n; ++i) centroids.row(a.labels[static_cast<std::size_t>(i)]) += points.row(i);
    for (Index c = 0; c < k; ++c) centroids.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);

    double objective = 0.0;
    for (Index i = 0; i < n; ++i) {
      objective += (points.row(i) - centroids.row(a.labels[static_cast<std::size_t>(i)])).squaredNorm();
    }
    a.objective = objective;
    a.objective_trace.push_back(objective);
  }
  return a;
}

}  // namespace

Assignment kmeans(const Eigen::MatrixXd& points, Index k, std::uint64_t seed, int restarts, unsigned threads,
                  int max_iterations) {
  check_k(k, points.rows());
  if (restarts < 1) throw ValidationError("restarts must be positive");
  std::vector<Assignment> runs(static_cast<std::size_t>(restarts));
  parallel_for(runs.size(), threads, [&](std::size_t r) {
    Rng rng(seed + r);
    runs[r] = lloyd(points, kmeans_pp_init(points, k, rng), max_iterations);
    runs[r].restart = static_cast<int>(r);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].objective < runs[best].objective) best = r;
  }
  Assignment out = std::move(runs[best]);
  out.labels = canonical_labels(out.labels);
  return out;
}

Assignment complete_linkage(const DistanceMatrix& distances, Index k) {
  const Index n = distances.size();
  check_k(k, n);
  Eigen::MatrixXd d = distances.values();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  std::vector<Index> active(static_cast<std::size_t>(n));
  std::iota(active.begin(), active.end(), Index{0});

  // `active` holds cluster representatives (smallest members) in increasing
  // order, so scanning pairs in order visits them lexicographically.
  while (static_cast<Index>(active.size()) > k) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double v = d(active[a], active[b]);
        if (v < best) {
          best = v;
          bi = a;
          bj = b;
        }
      }
    }
    const Index keep = active[bi], gone = active[bj];
    for (Index m : active) {
      const double merged = std::max(d(keep, m), d(gone, m));
      d(keep, m) = merged;
      d(m, keep) = merged;
    }
    d(keep, keep) = 0.0;
    parent[static_cast<std::size_t>(gone)] = keep;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  Assignment a;
  a.k = k;
  a.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Index root = i;
    while (parent[static_cast<std::size_t>(root)] != root) root = parent[static_cast<std::size_t>(root)];
    a.labels[static_cast<std::size_t>(i)] = root;
  }
  a.labels = canonical_labels(a.labels);
  return a;
}

DistanceMatrix gssf_distance_matrix(const SbRMatrix& sbr) {
  if (!is_symmetric(sbr.kind) || !is_gssf_family(sbr.kind)) {
    throw ValidationError("complete linkage over |GSSF| needs a symmetric GSSF-family kind");
  }
  if (sbr.normalized) throw ValidationError("|GSSF| distances need the unnormalized matrix");
  Eigen::MatrixXd v = sbr.values.cwiseAbs();
  v.diagonal().setZero();
  return DistanceMatrix(std::move(v));
}

DistanceMatrix euclidean_distance_matrix(const Eigen::MatrixXd& points) {
  const Index n = points.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
    }
  }
  return DistanceMatrix(std::move(d));
}

void write_assignment_csv(std::ostream& out, const std::vector<std::string>& ids, const Assignment& assignment,
                          const std::vector<std::string>& categories) {
  if (ids.size() != assignment.labels.size()) throw ValidationError("assignment/id count mismatch");
  out << "id,cluster_label,category\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i] << ',' << assignment.labels[i] << ',' << (i < categories.size() ? categories[i] : "") << '\n';
  }
}

}  // namespace gssf
