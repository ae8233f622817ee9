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

#include "gssf/similarity.hpp"

#include <algorithm>

#include "gssf/error.hpp"

namespace gssf {

std::string_view to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::kGssf:
      return "gssf";
    case SimilarityKind::kAsymmetric:
      return "asymmetric";
    case SimilarityKind::kMin:
      return "min";
    case SimilarityKind::kMax:
      return "max";
    case SimilarityKind::kNegEditDistance:
      return "neg_edit_distance";
  }
  return "unknown";
}

SimilarityKind parse_similarity_kind(std::string_view name) {
  if (name == "gssf") return SimilarityKind::kGssf;
  if (name == "asym" || name == "asymmetric") return SimilarityKind::kAsymmetric;
  if (name == "min") return SimilarityKind::kMin;
  if (name == "max") return SimilarityKind::kMax;
  if (name == "edit" || name == "neg_edit_distance") return SimilarityKind::kNegEditDistance;
  throw ValidationError("unknown similarity kind: " + std::string(name));
}

bool is_symmetric(SimilarityKind kind) { return kind != SimilarityKind::kAsymmetric; }

bool is_gssf_family(SimilarityKind kind) { return kind != SimilarityKind::kNegEditDistance; }

AnswerScoring score_answer(const ModelParams& params, std::string id, const FeatureSequence& features,
                           Index max_decode_len) {
  AnswerScoring a;
  a.id = std::move(id);
  a.annotations = encode(params, features);
  a.decode = greedy_decode(params, a.annotations, max_decode_len);
  return a;
}

double log_ratio_sum(std::span<const double> cross, std::span<const double> self) {
  if (cross.size() != self.size()) throw ValidationError("log-probability lists differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < cross.size(); ++i) sum += cross[i] - self[i];
  return sum;
}

double conditional_score(const AnswerScoring& a, const AnswerScoring& b, const ModelParams& params) {
  if (!a.scorable()) throw ValidationError("unscorable answer");
  const auto cross = teacher_forced_logprobs(params, b.annotations, a.decode.tokens);
  return log_ratio_sum(cross, a.decode.self_logprobs);
}

double combine_directional(SimilarityKind kind, double f_ab, double f_ba) {
  switch (kind) {
    case SimilarityKind::kGssf:
      return (f_ab + f_ba) / 2.0;
    case SimilarityKind::kAsymmetric:
      return f_ab;
    case SimilarityKind::kMin:
      return std::min(f_ab, f_ba);
    case SimilarityKind::kMax:
      return std::max(f_ab, f_ba);
    case SimilarityKind::kNegEditDistance:
      break;
  }
  throw ValidationError("edit distance is not built from directional scores");
}

double gssf(const AnswerScoring& a, const AnswerScoring& b, const ModelParams& params) {
  return combine_directional(SimilarityKind::kGssf, conditional_score(a, b, params),
                             conditional_score(b, a, params));
}

double variant_score(SimilarityKind kind, const AnswerScoring& a, const AnswerScoring& b,
                     const ModelParams& params) {
  if (kind == SimilarityKind::kNegEditDistance) {
    return -static_cast<double>(edit_distance(a.decode.tokens, b.decode.tokens));
  }
  const double f_ab = conditional_score(a, b, params);
  const double f_ba = kind == SimilarityKind::kAsymmetric ? 0.0 : conditional_score(b, a, params);
  return combine_directional(kind, f_ab, f_ba);
}

}  // namespace gssf
