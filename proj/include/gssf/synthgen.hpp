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

// Seeded synthetic answer sets rendered from hand-authored glyph templates.

#ifndef GSSF_SYNTHGEN_HPP_
#define GSSF_SYNTHGEN_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gssf/ink.hpp"
#include "gssf/rng.hpp"

namespace gssf {

using Eigen::Index;

struct SymbolTemplate {
  std::string symbol;
  std::vector<Stroke> strokes;  // polylines inside the unit box
  double advance = 0.6;         // glyph box width relative to its height
};

using TemplateSet = std::map<std::string, SymbolTemplate>;

// Digits 0-9, + - = x y ( ) and the fraction bar "\frac".
const TemplateSet& builtin_templates();

struct Jitter {
  double sigma = 0.0;         // per-point Gaussian noise, in glyph heights
  double scale = 0.0;         // per-glyph scale drawn from [1 - s, 1 + s]
  double shear = 0.0;         // per-glyph horizontal shear in [-shear, shear]
  double rotation_deg = 0.0;  // per-glyph rotation in [-r, r] degrees
};

struct CategorySpec {
  std::string name;
  std::vector<std::string> tokens;
  Index count = 0;
};

struct AnswerSetSpec {
  std::vector<CategorySpec> categories;
  Jitter jitter;
  double spacing = 0.1;  // template densification step, in glyph heights
  std::uint64_t seed = 0;
  std::string id_prefix = "s";

  void validate() const;
};

// Lays glyphs out left to right, one glyph box per token, each box
// independently scaled/sheared/rotated about its centre and then point-noised.
// Template polylines are densified at `spacing` before noise is added.
RawInk render_expression(const std::vector<std::string>& tokens, const TemplateSet& templates,
                         const Jitter& jitter, double spacing, Rng& rng);

// Sample i (category-major, before shuffling) draws from its own stream
// derive_seed(seed, i); the list is then shuffled with `seed` and ids are
// assigned in output order.
std::vector<RawInk> generate_answer_set(const AnswerSetSpec& spec, const TemplateSet& templates = builtin_templates());

// JSON: {"seed": u64, "spacing": real, "id_prefix": str,
//        "jitter": {"sigma", "scale", "shear", "rotation_deg"},
//        "categories": [{"name": str, "tokens": [str], "count": int}]}
AnswerSetSpec parse_answer_set_spec(const std::string& json_text);
std::string answer_set_spec_json(const AnswerSetSpec& spec);

// Evaluation answer set: 5 categories x 20 samples, sigma 0.02, scale 5%,
// rotation 5 degrees.
AnswerSetSpec benchmark_spec();
// Training set for the recognizer: same categories and jitter, 30 samples
// each, different seed.
AnswerSetSpec benchmark_training_spec();

}  // namespace gssf

#endif  // GSSF_SYNTHGEN_HPP_
