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

#include "doctest.h"
#include "gssf/error.hpp"
#include "gssf/metrics.hpp"
#include "gssf/rng.hpp"
#include "oracles.hpp"

using gssf::Index;
using Cats = std::vector<std::string>;

TEST_SUITE("metrics") {
  const std::vector<Index> labels{0, 0, 0, 1, 1, 1};
  const Cats cats{"a", "a", "b", "b", "b", "b"};

  TEST_CASE("hand fixture") {
    CHECK(gssf::purity(labels, cats) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(gssf::marking_cost_raw(labels, cats, 1.0, 1.0) == 9.0);
    CHECK(std::abs(gssf::marking_cost(labels, cats) - 0.75) < 1e-12);
    CHECK(9.0 / (2.0 * 6.0 * 1.0) == 0.75);
  }

  TEST_CASE("pure and worst cases") {
    const std::vector<Index> pure{0, 0, 1, 1, 1};
    const Cats pc{"a", "a", "b", "b", "b"};
    CHECK(gssf::purity(pure, pc) == 1.0);
    CHECK(gssf::marking_cost_raw(std::vector<Index>{0, 0, 0}, Cats{"a", "a", "a"}, 2.0, 0.5) == 3 * 0.5 * 2 + 2);

    for (Index h : {1, 2, 7, 10, 33}) {
      std::vector<Index> single;
      Cats c;
      for (Index i = 0; i < h; ++i) {
        single.push_back(i);
        c.push_back(i % 2 ? "x" : "y");
      }
      CHECK(gssf::purity(single, c) == 1.0);
      CHECK(gssf::marking_cost(single, c) == 1.0);
      CHECK(gssf::marking_cost_raw(single, c, 1.0, 1.0) == 2.0 * static_cast<double>(h));
      const std::vector<Index> one(static_cast<std::size_t>(h), 0);
      const Cats same(static_cast<std::size_t>(h), "a");
      CHECK(gssf::marking_cost(one, same) == doctest::Approx(1.0 / (2.0 * h) + 0.5).epsilon(1e-15));
    }
  }

  TEST_CASE("closed form agrees with the normalized raw cost") {
    gssf::Rng rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
      const Index h = 1 + static_cast<Index>(rng.below(40));
      const Index k = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(h)));
      std::vector<Index> l;
      Cats c;
      for (Index i = 0; i < h; ++i) {
        l.push_back(static_cast<Index>(rng.below(static_cast<std::uint64_t>(k))));
        c.push_back(std::string(1, static_cast<char>('a' + rng.below(4))));
      }
      const double norm = oracle::marking_cost_raw(l, c, 1.0, 1.0) / (2.0 * static_cast<double>(h));
      CHECK(std::abs(gssf::marking_cost(l, c) - norm) < 1e-12);
      CHECK(gssf::marking_cost_raw(l, c, 1.5, 0.3) == doctest::Approx(oracle::marking_cost_raw(l, c, 1.5, 0.3)));
      CHECK(gssf::purity(l, c) == doctest::Approx(oracle::purity(l, c)).epsilon(1e-15));
    }
  }

  TEST_CASE("evaluation summary") {
    const auto e = gssf::evaluate(labels, cats);
    CHECK(e.k == 2);
    CHECK(e.h == 6);
    CHECK(e.j == 2);
    REQUIRE(e.per_cluster.size() == 2);
    CHECK(e.per_cluster[0].majority == "a");
    CHECK(e.per_cluster[0].majority_size == 2);
    CHECK(e.per_cluster[1].size == 3);
    // Tie between "b" and "a" in one cluster: lexicographically smallest wins.
    const auto tie = gssf::evaluate(std::vector<Index>{0, 0}, Cats{"b", "a"});
    CHECK(tie.per_cluster[0].majority == "a");
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_AS(gssf::purity(std::vector<Index>{}, Cats{}), gssf::ValidationError);
    CHECK_THROWS_AS(gssf::purity(std::vector<Index>{0}, Cats{"a", "b"}), gssf::ValidationError);
  }

  TEST_CASE("population mean and sd") {
    const auto m = gssf::mean_sd(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == 2.5);
    CHECK(m.sd == doctest::Approx(std::sqrt(1.25)));
    CHECK(gssf::mean_sd(std::vector<double>{7.0}).sd == 0.0);
  }
}
