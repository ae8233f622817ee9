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

#ifndef GSSF_EDIT_DISTANCE_HPP_
#define GSSF_EDIT_DISTANCE_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace gssf {

// Unit-cost Levenshtein distance between two symbol sequences.
template <class T>
std::size_t edit_distance(std::span<const T> s, std::span<const T> t) {
  if (s.size() < t.size()) std::swap(s, t);
  std::vector<std::size_t> row(t.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= s.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const std::size_t above = row[j];
      const std::size_t substitute = diagonal + (s[i - 1] == t[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[t.size()];
}

template <class T>
std::size_t edit_distance(const std::vector<T>& s, const std::vector<T>& t) {
  return edit_distance(std::span<const T>(s), std::span<const T>(t));
}

}  // namespace gssf

#endif  // GSSF_EDIT_DISTANCE_HPP_
