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

#include "gssf/synthgen.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "gssf/error.hpp"
#include "json.hpp"

namespace gssf {
namespace {

constexpr double kGlyphGap = 0.25;

Stroke polyline(std::initializer_list<std::pair<double, double>> pts) {
  Stroke s(2, static_cast<Index>(pts.size()));
  Index c = 0;
  for (const auto& [x, y] : pts) {
    s(0, c) = x;
    s(1, c) = y;
    ++c;
  }
  return s;
}

Stroke ellipse(double cx, double cy, double rx, double ry, int segments) {
  Stroke s(2, segments + 1);
  for (int i = 0; i <= segments; ++i) {
    const double t = std::numbers::pi / 2 + 2.0 * std::numbers::pi * i / segments;
    s(0, i) = cx + rx * std::cos(t);
    s(1, i) = cy + ry * std::sin(t);
  }
  return s;
}

TemplateSet make_templates() {
  TemplateSet t;
  auto add = [&](const std::string& sym, double advance, std::vector<Stroke> strokes) {
    t[sym] = SymbolTemplate{sym, std::move(strokes), advance};
  };
  // y grows upwards; digits span the full box.
  add("0", 0.6, {ellipse(0.5, 0.5, 0.38, 0.5, 16)});
  add("1", 0.4, {polyline({{0.25, 0.8}, {0.55, 1.0}, {0.55, 0.0}})});
  add("2", 0.6, {polyline({{0.15, 0.75}, {0.3, 0.95}, {0.6, 0.98}, {0.82, 0.8}, {0.75, 0.55}, {0.15, 0.0},
                           {0.88, 0.0}})});
  add("3", 0.6, {polyline({{0.15, 0.9}, {0.5, 1.0}, {0.8, 0.85}, {0.75, 0.62}, {0.45, 0.52}, {0.8, 0.4},
                           {0.85, 0.15}, {0.5, 0.0}, {0.12, 0.1}})});
  add("4", 0.6, {polyline({{0.62, 1.0}, {0.1, 0.35}, {0.92, 0.35}}), polyline({{0.66, 0.72}, {0.66, 0.0}})});
  add("5", 0.6, {polyline({{0.82, 1.0}, {0.25, 1.0}, {0.2, 0.55}, {0.6, 0.6}, {0.85, 0.35}, {0.72, 0.06},
                           {0.4, 0.0}, {0.14, 0.12}})});
  add("6", 0.6, {polyline({{0.75, 0.95}, {0.4, 0.82}, {0.18, 0.42}, {0.28, 0.05}, {0.6, 0.0}, {0.82, 0.25},
                           {0.66, 0.5}, {0.3, 0.46}, {0.18, 0.3}})});
  add("7", 0.6, {polyline({{0.1, 1.0}, {0.9, 1.0}, {0.4, 0.0}})});
  add("8", 0.6, {polyline({{0.5, 0.55}, {0.2, 0.76}, {0.5, 1.0}, {0.8, 0.76}, {0.5, 0.55}, {0.15, 0.26},
                           {0.5, 0.0}, {0.85, 0.26}, {0.5, 0.55}})});
  add("9", 0.6, {polyline({{0.8, 0.72}, {0.5, 0.52}, {0.2, 0.72}, {0.5, 1.0}, {0.8, 0.82}, {0.8, 0.4},
                           {0.68, 0.0}})});
  add("+", 0.6, {polyline({{0.1, 0.5}, {0.9, 0.5}}), polyline({{0.5, 0.12}, {0.5, 0.88}})});
  add("-", 0.6, {polyline({{0.1, 0.5}, {0.9, 0.5}})});
  add("=", 0.6, {polyline({{0.1, 0.64}, {0.9, 0.64}}), polyline({{0.1, 0.36}, {0.9, 0.36}})});
  add("x", 0.6, {polyline({{0.1, 0.7}, {0.9, 0.0}}), polyline({{0.9, 0.7}, {0.1, 0.0}})});
  add("y", 0.6, {polyline({{0.1, 0.7}, {0.5, 0.35}}), polyline({{0.9, 0.7}, {0.2, 0.0}})});
  add("(", 0.35, {polyline({{0.8, 1.0}, {0.4, 0.78}, {0.25, 0.5}, {0.4, 0.22}, {0.8, 0.0}})});
  add(")", 0.35, {polyline({{0.2, 1.0}, {0.6, 0.78}, {0.75, 0.5}, {0.6, 0.22}, {0.2, 0.0}})});
  add("\\frac", 1.4, {polyline({{0.0, 0.5}, {1.0, 0.5}})});
  return t;
}

// Splits every segment into ceil(length / spacing) equal pieces.
Stroke densify(const Stroke& s, double spacing) {
  if (s.cols() < 2) return s;
  std::vector<Eigen::Vector2d> pts{s.col(0)};
  for (Index j = 1; j < s.cols(); ++j) {
    const Eigen::Vector2d a = s.col(j - 1), b = s.col(j);
    const auto pieces = std::max<Index>(1, static_cast<Index>(std::ceil((b - a).norm() / spacing - 1e-9)));
    for (Index p = 1; p <= pieces; ++p) {
      pts.push_back(a + (b - a) * (static_cast<double>(p) / static_cast<double>(pieces)));
    }
  }
  Stroke out(2, static_cast<Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) out.col(static_cast<Index>(i)) = pts[i];
  return out;
}

}  // namespace

const TemplateSet& builtin_templates() {
  static const TemplateSet templates = make_templates();
  return templates;
}

void AnswerSetSpec::validate() const {
  if (categories.size() < 2) throw ValidationError("an answer set needs at least 2 categories");
  for (const auto& c : categories) {
    if (c.count < 1) throw ValidationError("category '" + c.name + "' needs a positive count");
    if (c.tokens.empty()) throw ValidationError("category '" + c.name + "' has no tokens");
  }
  const auto& j = jitter;
  if (!(j.sigma >= 0.0) || !(j.scale >= 0.0 && j.scale < 1.0) || !(j.shear >= 0.0) || !(j.rotation_deg >= 0.0)) {
    throw ValidationError("jitter parameters out of range");
  }
  if (!(spacing > 0.0)) throw ValidationError("spacing must be positive");
}

RawInk render_expression(const std::vector<std::string>& tokens, const TemplateSet& templates,
                         const Jitter& jitter, double spacing, Rng& rng) {
  if (tokens.empty()) throw ValidationError("cannot render an empty expression");
  RawInk ink;
  double x_offset = 0.0;
  for (const auto& token : tokens) {
    auto it = templates.find(token);
    if (it == templates.end()) throw ValidationError("no template for symbol: " + token);
    const SymbolTemplate& glyph = it->second;

    const double scale = 1.0 + rng.uniform(-jitter.scale, jitter.scale);
    const double shear = rng.uniform(-jitter.shear, jitter.shear);
    const double angle = rng.uniform(-jitter.rotation_deg, jitter.rotation_deg) * std::numbers::pi / 180.0;
    Eigen::Matrix2d rotation;
    rotation << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    Eigen::Matrix2d shearing;
    shearing << 1.0, shear, 0.0, 1.0;
    const Eigen::Matrix2d affine = scale * rotation * shearing;
    const Eigen::Vector2d centre(glyph.advance / 2.0, 0.5);
    const Eigen::Vector2d origin(x_offset, 0.0);

    for (const auto& proto : glyph.strokes) {
      Stroke s = proto;
      s.row(0) *= glyph.advance;
      s = densify(s, spacing);
      s = (affine * (s.colwise() - centre)).colwise() + (centre + origin);
      if (jitter.sigma > 0.0) {
        for (Index c = 0; c < s.cols(); ++c) {
          s(0, c) += jitter.sigma * rng.normal();
          s(1, c) += jitter.sigma * rng.normal();
        }
      }
      ink.strokes.push_back(std::move(s));
    }
    x_offset += glyph.advance + kGlyphGap;
  }
  ink.label = tokens;
  return ink;
}

std::vector<RawInk> generate_answer_set(const AnswerSetSpec& spec, const TemplateSet& templates) {
  spec.validate();
  std::vector<RawInk> samples;
  std::uint64_t index = 0;
  for (std::size_t c = 0; c < spec.categories.size(); ++c) {
    const auto& cat = spec.categories[c];
    const std::string name = cat.name.empty() ? "C" + std::to_string(c + 1) : cat.name;
    for (Index i = 0; i < cat.count; ++i) {
      Rng rng(derive_seed(spec.seed, index++));
      RawInk ink = render_expression(cat.tokens, templates, spec.jitter, spec.spacing, rng);
      ink.category = name;
      samples.push_back(std::move(ink));
    }
  }
  Rng order(spec.seed);
  order.shuffle(samples.begin(), samples.end());
  const int width = samples.size() > 9999 ? static_cast<int>(std::to_string(samples.size()).size()) : 4;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*zu", width, i);
    samples[i].id = spec.id_prefix + buf;
  }
  return samples;
}

AnswerSetSpec parse_answer_set_spec(const std::string& json_text) {
  AnswerSetSpec spec;
  try {
    const auto j = nlohmann::json::parse(json_text);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.spacing = j.value("spacing", spec.spacing);
    spec.id_prefix = j.value("id_prefix", spec.id_prefix);
    if (j.contains("jitter")) {
      const auto& jj = j.at("jitter");
      spec.jitter.sigma = jj.value("sigma", 0.0);
      spec.jitter.scale = jj.value("scale", 0.0);
      spec.jitter.shear = jj.value("shear", 0.0);
      spec.jitter.rotation_deg = jj.value("rotation_deg", 0.0);
    }
    for (const auto& c : j.at("categories")) {
      CategorySpec cat;
      cat.name = c.value("name", std::string{});
      cat.tokens = c.at("tokens").get<std::vector<std::string>>();
      cat.count = c.at("count").get<Index>();
      spec.categories.push_back(std::move(cat));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad answer-set spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::string answer_set_spec_json(const AnswerSetSpec& spec) {
  nlohmann::json j;
  j["seed"] = spec.seed;
  j["spacing"] = spec.spacing;
  j["id_prefix"] = spec.id_prefix;
  j["jitter"] = {{"sigma", spec.jitter.sigma},
                 {"scale", spec.jitter.scale},
                 {"shear", spec.jitter.shear},
                 {"rotation_deg", spec.jitter.rotation_deg}};
  auto cats = nlohmann::json::array();
  for (const auto& c : spec.categories) cats.push_back({{"name", c.name}, {"tokens", c.tokens}, {"count", c.count}});
  j["categories"] = std::move(cats);
  return j.dump(2) + "\n";
}

namespace {

std::vector<CategorySpec> benchmark_categories(Index count) {
  return {
      {"x=2", {"x", "=", "2"}, count},
      {"x=8", {"x", "=", "8"}, count},
      {"x=-2", {"x", "=", "-", "2"}, count},
      {"2", {"2"}, count},
      {"x+3=5", {"x", "+", "3", "=", "5"}, count},
  };
}

Jitter benchmark_jitter() {
  Jitter j;
  j.sigma = 0.02;
  j.scale = 0.05;
  j.rotation_deg = 5.0;
  return j;
}

}  // namespace

AnswerSetSpec benchmark_spec() {
  AnswerSetSpec spec;
  spec.categories = benchmark_categories(20);
  spec.jitter = benchmark_jitter();
  spec.spacing = 0.1;
  spec.seed = 20260101;
  spec.id_prefix = "a";
  return spec;
}

AnswerSetSpec benchmark_training_spec() {
  AnswerSetSpec spec = benchmark_spec();
  spec.categories = benchmark_categories(30);
  spec.seed = 20260202;
  spec.id_prefix = "t";
  return spec;
}

}  // namespace gssf
