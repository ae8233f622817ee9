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

// Generative sequence similarity between two answers.
//
// For answers a and b with greedy decodes y^a and y^b,
//   F(a|b) = sum_i [log P(y^a_i | b, y^a_<i) - log P(y^a_i | a, y^a_<i)]
// scores how well b's encoding explains a's own reading, relative to a.
// GSSF(a, b) = (F(a|b) + F(b|a)) / 2 is symmetric and zero on the diagonal;
// more negative means less similar.

#ifndef GSSF_SIMILARITY_HPP_
#define GSSF_SIMILARITY_HPP_

#include <span>
#include <string>
#include <string_view>

#include "gssf/edit_distance.hpp"
#include "gssf/seq2seq.hpp"

namespace gssf {

enum class SimilarityKind { kGssf, kAsymmetric, kMin, kMax, kNegEditDistance };

std::string_view to_string(SimilarityKind kind);
// Accepts the short CLI names (gssf, asym, min, max, edit) and the long ones.
SimilarityKind parse_similarity_kind(std::string_view name);
bool is_symmetric(SimilarityKind kind);
bool is_gssf_family(SimilarityKind kind);

// An answer decoded once under its own encoder.
struct AnswerScoring {
  std::string id;
  Annotations annotations;
  ScoredDecode decode;

  bool scorable() const { return !decode.tokens.empty(); }
};

AnswerScoring score_answer(const ModelParams& params, std::string id, const FeatureSequence& features,
                           Index max_decode_len);

// sum_i (cross[i] - self[i]); the spans must have equal length.
double log_ratio_sum(std::span<const double> cross, std::span<const double> self);

// F(a|b). Throws ValidationError("unscorable answer") if a decoded to nothing.
double conditional_score(const AnswerScoring& a, const AnswerScoring& b, const ModelParams& params);

// Folds the two directional scores F(a|b), F(b|a) into one GSSF-family value.
double combine_directional(SimilarityKind kind, double f_ab, double f_ba);

double gssf(const AnswerScoring& a, const AnswerScoring& b, const ModelParams& params);

// Any kind, with the shared "larger is more similar" convention; the
// edit-distance kind returns the negated token edit distance.
double variant_score(SimilarityKind kind, const AnswerScoring& a, const AnswerScoring& b,
                     const ModelParams& params);

}  // namespace gssf

#endif  // GSSF_SIMILARITY_HPP_
