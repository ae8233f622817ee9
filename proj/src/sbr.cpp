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

#include "gssf/sbr.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gssf/error.hpp"
#include "gssf/parallel.hpp"

namespace gssf {

NormalizationMode parse_normalization_mode(std::string_view name) {
  if (name == "global") return NormalizationMode::kGlobal;
  if (name == "row" || name == "per_row") return NormalizationMode::kPerRow;
  throw ValidationError("unknown normalization mode: " + std::string(name));
}

std::string_view to_string(NormalizationMode mode) {
  return mode == NormalizationMode::kGlobal ? "global" : "per_row";
}

Eigen::MatrixXd conditional_score_matrix(const std::vector<AnswerScoring>& answers, const ModelParams& params,
                                         unsigned threads) {
  const auto n = static_cast<Index>(answers.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  const auto cells = static_cast<std::size_t>(n * n);
  parallel_for(cells, threads, [&](std::size_t cell) {
    const auto i = static_cast<std::size_t>(static_cast<Index>(cell) / n);
    const auto j = static_cast<std::size_t>(static_cast<Index>(cell) % n);
    if (!answers[i].scorable()) return;
    c(static_cast<Index>(i), static_cast<Index>(j)) = conditional_score(answers[i], answers[j], params);
  });
  return c;
}

namespace {

SbRMatrix empty_like(const std::vector<AnswerScoring>& answers, SimilarityKind kind) {
  SbRMatrix m;
  m.kind = kind;
  for (const auto& a : answers) {
    m.ids.push_back(a.id);
    m.unscorable.push_back(!a.scorable());
  }
  const auto n = static_cast<Index>(answers.size());
  m.values = Eigen::MatrixXd::Zero(n, n);
  return m;
}

}  // namespace

SbRMatrix sbr_from_conditional(const Eigen::MatrixXd& conditional, const std::vector<AnswerScoring>& answers,
                               SimilarityKind kind) {
  if (!is_gssf_family(kind)) throw ValidationError("edit distance does not use directional scores");
  const auto n = static_cast<Index>(answers.size());
  if (conditional.rows() != n || conditional.cols() != n) throw ValidationError("score matrix size mismatch");
  SbRMatrix m = empty_like(answers, kind);
  auto bad = [&](Index i) { return m.unscorable[static_cast<std::size_t>(i)]; };

  double lowest = std::numeric_limits<double>::infinity();
  bool any = false;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (bad(i) || bad(j)) continue;
      m.values(i, j) = combine_directional(kind, conditional(i, j), conditional(j, i));
      lowest = std::min(lowest, m.values(i, j));
      any = true;
    }
  }
  if (!any) throw RuntimeFailure("no answer is scorable");
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && (bad(i) || bad(j))) m.values(i, j) = lowest;
    }
  }
  return m;
}

SbRMatrix build_sbr_matrix(const std::vector<AnswerScoring>& answers, SimilarityKind kind,
                           const ModelParams& params, unsigned threads) {
  if (answers.size() < 2) throw ValidationError("a similarity matrix needs at least 2 answers");
  if (kind == SimilarityKind::kNegEditDistance) {
    SbRMatrix m = empty_like(answers, kind);
    const auto n = static_cast<Index>(answers.size());
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        m.values(i, j) = -static_cast<double>(edit_distance(answers[static_cast<std::size_t>(i)].decode.tokens,
                                                            answers[static_cast<std::size_t>(j)].decode.tokens));
      }
    }
    return m;
  }
  return sbr_from_conditional(conditional_score_matrix(answers, params, threads), answers, kind);
}

namespace {

// Returns false when the block is constant.
template <class Block>
bool min_max_scale(Block&& block) {
  const double lo = block.minCoeff();
  const double hi = block.maxCoeff();
  if (!(hi > lo)) {
    block.setZero();
    return false;
  }
  block = ((block.array() - lo) / (hi - lo)).matrix();
  return true;
}

}  // namespace

SbRMatrix normalize_unit_interval(const SbRMatrix& m, NormalizationMode mode) {
  if (!m.values.allFinite()) throw ValidationError("similarity matrix has non-finite entries");
  SbRMatrix out = m;
  out.normalized = true;
  out.degenerate = false;
  if (mode == NormalizationMode::kGlobal) {
    out.degenerate = !min_max_scale(out.values);
  } else {
    for (Index i = 0; i < out.values.rows(); ++i) {
      if (!min_max_scale(out.values.row(i))) out.degenerate = true;
    }
  }
  return out;
}

void write_sbr_csv(std::ostream& out, const SbRMatrix& m) {
  out << "id";
  for (const auto& id : m.ids) out << ',' << id;
  out << '\n';
  char buf[64];
  for (Index i = 0; i < m.size(); ++i) {
    out << m.ids[static_cast<std::size_t>(i)];
    for (Index j = 0; j < m.size(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof buf, m.values(i, j));
      out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

SbRMatrix read_sbr_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty similarity CSV");
  auto header = split_csv(line);
  if (header.size() < 2 || header[0] != "id") throw ValidationError("similarity CSV header must start with id");
  SbRMatrix m;
  m.ids.assign(header.begin() + 1, header.end());
  const auto n = static_cast<Index>(m.ids.size());
  m.values.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ValidationError("similarity CSV has too few rows");
    auto cells = split_csv(line);
    if (static_cast<Index>(cells.size()) != n + 1) throw ValidationError("similarity CSV row has wrong width");
    if (cells[0] != m.ids[static_cast<std::size_t>(i)]) throw ValidationError("similarity CSV row id mismatch");
    for (Index j = 0; j < n; ++j) {
      const auto& c = cells[static_cast<std::size_t>(j + 1)];
      double v = 0.0;
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        throw ValidationError("bad similarity CSV cell: " + c);
      }
      m.values(i, j) = v;
    }
  }
  m.unscorable.assign(static_cast<std::size_t>(n), false);
  const bool unit = m.values.allFinite() && (m.values.array() >= 0.0).all() && (m.values.array() <= 1.0).all();
  m.normalized = unit;
  return m;
}

void write_heatmap_pgm(std::ostream& out, const SbRMatrix& m) {
  if (!m.normalized) throw ValidationError("heatmap needs a normalized matrix");
  const Index n = m.size();
  out << "P5\n" << n << ' ' << n << "\n255\n";
  std::string pixels(static_cast<std::size_t>(n * n), '\0');
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double v = std::clamp(m.values(i, j), 0.0, 1.0);
      pixels[static_cast<std::size_t>(i * n + j)] = static_cast<char>(std::lround(255.0 * v));
    }
  }
  out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace gssf
