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

#include "gssf/ink.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gssf/error.hpp"
#include "json.hpp"

namespace gssf {
namespace {

using Eigen::Index;

// Resampling is repeated until points move less than this between rounds.
constexpr int kMaxResampleRounds = 500;
constexpr double kResampleTolerance = 1e-12;

double stroke_length(const Stroke& s) {
  if (s.cols() < 2) return 0.0;
  return (s.rightCols(s.cols() - 1) - s.leftCols(s.cols() - 1)).colwise().norm().sum();
}

// Segment count used for a stroke of arc length `length`; 0 means collapse to
// a single point.
Index segment_count(double length, double spacing) {
  if (!(length > 0.0)) return 0;
  return std::max<Index>(1, std::llround(length / spacing));
}

// Places n + 1 points at equal arc-length steps along the polyline,
// endpoints included.
Stroke resample_stroke(const Stroke& s, Index n) {
  if (s.cols() == 1) return s;
  if (n == 0) return s.leftCols(1);
  const Index m = s.cols();
  Eigen::VectorXd cumulative(m);
  cumulative(0) = 0.0;
  for (Index j = 1; j < m; ++j) {
    cumulative(j) = cumulative(j - 1) + (s.col(j) - s.col(j - 1)).norm();
  }
  const double total = cumulative(m - 1);
  Stroke out(2, n + 1);
  out.col(0) = s.col(0);
  out.col(n) = s.col(m - 1);
  Index seg = 1;
  for (Index i = 1; i < n; ++i) {
    const double target = total * static_cast<double>(i) / static_cast<double>(n);
    while (seg < m - 1 && cumulative(seg) < target) ++seg;
    const double span = cumulative(seg) - cumulative(seg - 1);
    const double t = span > 0.0 ? (target - cumulative(seg - 1)) / span : 0.0;
    out.col(i) = s.col(seg - 1) + t * (s.col(seg) - s.col(seg - 1));
  }
  return out;
}

void normalize_frame(std::vector<Stroke>& strokes) {
  Eigen::Vector2d lo = strokes.front().col(0);
  Eigen::Vector2d hi = lo;
  for (const auto& s : strokes) {
    lo = lo.cwiseMin(s.rowwise().minCoeff());
    hi = hi.cwiseMax(s.rowwise().maxCoeff());
  }
  const Eigen::Vector2d extent = hi - lo;
  double scale;
  if (extent.y() > 0.0) {
    scale = 1.0 / extent.y();
  } else if (extent.x() > 0.0) {
    scale = 1.0 / extent.x();
  } else {
    throw ValidationError("degenerate extent");
  }
  for (auto& s : strokes) s = (s.colwise() - lo) * scale;
}

std::vector<Index> segment_counts(const std::vector<Stroke>& strokes, double spacing) {
  std::vector<Index> counts;
  counts.reserve(strokes.size());
  for (const auto& s : strokes) counts.push_back(segment_count(stroke_length(s), spacing));
  return counts;
}

}  // namespace

Index RawInk::point_count() const {
  Index n = 0;
  for (const auto& s : strokes) n += s.cols();
  return n;
}

void validate(const RawInk& ink) {
  if (ink.strokes.empty()) throw ValidationError("ink '" + ink.id + "' has no strokes");
  for (const auto& s : ink.strokes) {
    if (s.cols() == 0) throw ValidationError("ink '" + ink.id + "' has an empty stroke");
    if (!s.allFinite()) throw ValidationError("ink '" + ink.id + "' has non-finite coordinates");
  }
}

void validate(const FeatureSequence& features) {
  for (Index i = 0; i < features.rows(); ++i) {
    const double down = features(i, 6);
    const double up = features(i, 7);
    const bool binary = (down == 0.0 || down == 1.0) && (up == 0.0 || up == 1.0);
    if (!binary || down + up != 1.0) {
      throw ValidationError("feature row " + std::to_string(i) + " breaks the pen-state one-hot");
    }
  }
}

RawInk resample_and_normalize(const RawInk& ink, double spacing) {
  validate(ink);
  if (!(spacing > 0.0)) throw ValidationError("spacing must be positive");
  RawInk out = ink;
  normalize_frame(out.strokes);
  auto counts = segment_counts(out.strokes, spacing);
  for (int round = 0; round < kMaxResampleRounds; ++round) {
    const std::vector<Stroke> before = out.strokes;
    for (std::size_t s = 0; s < out.strokes.size(); ++s) {
      out.strokes[s] = resample_stroke(out.strokes[s], counts[s]);
    }
    normalize_frame(out.strokes);
    double moved = 0.0;
    for (std::size_t s = 0; s < out.strokes.size(); ++s) {
      moved = before[s].cols() == out.strokes[s].cols()
                  ? std::max(moved, (before[s] - out.strokes[s]).cwiseAbs().maxCoeff())
                  : std::numeric_limits<double>::infinity();
    }
    auto next = segment_counts(out.strokes, spacing);
    if (next == counts && moved <= kResampleTolerance) break;
    counts = std::move(next);
  }
  return out;
}

FeatureSequence extract_features(const RawInk& ink) {
  validate(ink);
  const Index length = ink.point_count();
  Eigen::Matrix2Xd points(2, length);
  std::vector<std::size_t> stroke_of(static_cast<std::size_t>(length));
  Index at = 0;
  for (std::size_t s = 0; s < ink.strokes.size(); ++s) {
    const auto& stroke = ink.strokes[s];
    points.middleCols(at, stroke.cols()) = stroke;
    for (Index j = 0; j < stroke.cols(); ++j) stroke_of[static_cast<std::size_t>(at + j)] = s;
    at += stroke.cols();
  }

  FeatureSequence features(length, kFeatureDim);
  auto point = [&](Index i) { return points.col(std::min(i, length - 1)); };
  for (Index i = 0; i < length; ++i) {
    features.block<1, 2>(i, 0) = point(i).transpose();
    features.block<1, 2>(i, 2) = (point(i + 1) - point(i)).transpose();
    features.block<1, 2>(i, 4) = (point(i + 2) - point(i)).transpose();
    const bool same_stroke =
        i + 1 < length && stroke_of[static_cast<std::size_t>(i)] == stroke_of[static_cast<std::size_t>(i + 1)];
    features(i, 6) = same_stroke ? 1.0 : 0.0;
    features(i, 7) = same_stroke ? 0.0 : 1.0;
  }
  return features;
}

FeatureSequence preprocess(const RawInk& ink, double spacing) {
  return extract_features(resample_and_normalize(ink, spacing));
}

namespace {

RawInk ink_from_json(const nlohmann::json& j) {
  RawInk ink;
  ink.id = j.at("id").get<std::string>();
  if (j.contains("category") && !j.at("category").is_null()) {
    ink.category = j.at("category").get<std::string>();
  }
  if (j.contains("label") && !j.at("label").is_null()) {
    ink.label = j.at("label").get<std::vector<std::string>>();
  }
  for (const auto& js : j.at("strokes")) {
    Stroke s(2, static_cast<Index>(js.size()));
    Index col = 0;
    for (const auto& p : js) {
      if (!p.is_array() || p.size() != 2) throw ValidationError("point must be [x, y]");
      s(0, col) = p.at(0).get<double>();
      s(1, col) = p.at(1).get<double>();
      ++col;
    }
    ink.strokes.push_back(std::move(s));
  }
  validate(ink);
  return ink;
}

nlohmann::json ink_to_json(const RawInk& ink) {
  nlohmann::json j;
  j["id"] = ink.id;
  j["category"] = ink.category ? nlohmann::json(*ink.category) : nlohmann::json(nullptr);
  j["label"] = ink.label ? nlohmann::json(*ink.label) : nlohmann::json(nullptr);
  auto strokes = nlohmann::json::array();
  for (const auto& s : ink.strokes) {
    auto js = nlohmann::json::array();
    for (Index c = 0; c < s.cols(); ++c) js.push_back({s(0, c), s(1, c)});
    strokes.push_back(std::move(js));
  }
  j["strokes"] = std::move(strokes);
  return j;
}

}  // namespace

std::vector<RawInk> read_ink_jsonl(std::istream& in) {
  std::vector<RawInk> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      samples.push_back(ink_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("ink line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("ink line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return samples;
}

std::vector<RawInk> read_ink_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open ink file: " + path);
  return read_ink_jsonl(in);
}

void write_ink_jsonl(std::ostream& out, const std::vector<RawInk>& samples) {
  for (const auto& ink : samples) out << ink_to_json(ink).dump() << '\n';
}

void write_ink_jsonl(const std::string& path, const std::vector<RawInk>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write ink file: " + path);
  write_ink_jsonl(out, samples);
}

}  // namespace gssf
