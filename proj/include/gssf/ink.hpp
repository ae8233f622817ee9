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

// Pen-trajectory data model, resampling/normalization, and point features.

#ifndef GSSF_INK_HPP_
#define GSSF_INK_HPP_

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gssf {

// One pen-down trace; column j is the j-th point (x, y) in writing order.
using Stroke = Eigen::Matrix2Xd;

// Number of per-point features.
inline constexpr Eigen::Index kFeatureDim = 8;

// L x 8 matrix, one row per trajectory point:
// [x, y, dx, dy, d'x, d'y, pen-down, pen-up].
using FeatureSequence = Eigen::Matrix<double, Eigen::Dynamic, kFeatureDim>;

struct RawInk {
  std::string id;
  std::vector<Stroke> strokes;
  std::optional<std::string> category;
  std::optional<std::vector<std::string>> label;

  Eigen::Index point_count() const;
};

// Throws ValidationError unless the ink has >= 1 stroke, every stroke has
// >= 1 point, and all coordinates are finite.
void validate(const RawInk& ink);

// Throws ValidationError if any row breaks the pen-state one-hot rule.
void validate(const FeatureSequence& features);

// Default resampling spacing, as a fraction of the normalized height.
inline constexpr double kDefaultSpacing = 0.05;

// Translates the minimum corner to the origin and scales uniformly so the
// y-extent is [0, 1] (the x-extent if the ink is perfectly flat), then
// resamples every stroke at equal arc-length steps close to `spacing`.
// Resampling and normalization are repeated until the per-stroke segment
// counts settle, which makes the operation idempotent. Single-point strokes
// and zero-length strokes come out as one point.
RawInk resample_and_normalize(const RawInk& ink, double spacing = kDefaultSpacing);

// Point features over the flattened trajectory. Missing look-ahead
// neighbours at the end repeat the last point, and the final point is
// always flagged pen-up.
FeatureSequence extract_features(const RawInk& ink);

// resample_and_normalize followed by extract_features.
FeatureSequence preprocess(const RawInk& ink, double spacing = kDefaultSpacing);

// JSON Lines, one sample per line:
//   {"id": str, "category": str|null, "label": [str]|null,
//    "strokes": [[[x, y], ...], ...]}
std::vector<RawInk> read_ink_jsonl(std::istream& in);
std::vector<RawInk> read_ink_jsonl(const std::string& path);
void write_ink_jsonl(std::ostream& out, const std::vector<RawInk>& samples);
void write_ink_jsonl(const std::string& path, const std::vector<RawInk>& samples);

}  // namespace gssf

#endif  // GSSF_INK_HPP_
