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

// Similarity-based representation: row i holds answer i's similarity to
// every answer in the set, itself included.

#ifndef GSSF_SBR_HPP_
#define GSSF_SBR_HPP_

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "gssf/similarity.hpp"

namespace gssf {

enum class NormalizationMode { kGlobal, kPerRow };

NormalizationMode parse_normalization_mode(std::string_view name);
std::string_view to_string(NormalizationMode mode);

struct SbRMatrix {
  Eigen::MatrixXd values;  // N x N
  std::vector<std::string> ids;
  SimilarityKind kind = SimilarityKind::kGssf;
  bool normalized = false;
  bool degenerate = false;       // normalization met a constant range
  std::vector<bool> unscorable;  // answers that decoded to nothing

  Index size() const { return values.rows(); }
};

// C(i, j) = F(i|j) for every scorable answer i; rows of unscorable answers
// are NaN. Cells are filled independently on `threads` workers.
Eigen::MatrixXd conditional_score_matrix(const std::vector<AnswerScoring>& answers, const ModelParams& params,
                                         unsigned threads = 1);

// Assembles a GSSF-family matrix from precomputed directional scores.
// Off-diagonal cells in the row and column of an unscorable answer take the
// minimum of the remaining matrix; the diagonal stays 0.
SbRMatrix sbr_from_conditional(const Eigen::MatrixXd& conditional, const std::vector<AnswerScoring>& answers,
                               SimilarityKind kind);

// Requires N >= 2. Throws RuntimeFailure if no answer is scorable for a
// GSSF-family kind.
SbRMatrix build_sbr_matrix(const std::vector<AnswerScoring>& answers, SimilarityKind kind,
                           const ModelParams& params, unsigned threads = 1);

// Min-max scaling into [0, 1], over all N^2 entries (global) or per row. A
// constant range maps to zeros and sets `degenerate`.
SbRMatrix normalize_unit_interval(const SbRMatrix& m, NormalizationMode mode = NormalizationMode::kGlobal);

// CSV with a header "id,<id_1>,...,<id_N>" and one "<id_i>,v_i1,...,v_iN"
// row per answer.
void write_sbr_csv(std::ostream& out, const SbRMatrix& m);
SbRMatrix read_sbr_csv(std::istream& in);

// Binary PGM (P5, maxval 255) with pixel = round(255 * v); needs a
// normalized matrix.
void write_heatmap_pgm(std::ostream& out, const SbRMatrix& m);

}  // namespace gssf

#endif  // GSSF_SBR_HPP_
