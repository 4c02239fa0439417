// Copyright 2026 The forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "forge/asciiart.hpp"
#include "helpers.hpp"

using forge::aa_score;
using forge::filter_ascii_art;
using forge::TokenSeq;
using forge::word_freq_vector;
using testutil::seq;

TEST_CASE("word frequency vectors match the worked examples") {
  CHECK(word_freq_vector(seq("That 's pretty cool .")).counts ==
        std::vector<long>{1, 1, 1, 1, 1});
  CHECK(word_freq_vector(seq("THIS IS MY LIFE ! ! !")).counts ==
        std::vector<long>{1, 1, 1, 1, 3});
  CHECK(word_freq_vector(seq("w w w w")).counts == std::vector<long>{4});
  CHECK_THROWS_AS(word_freq_vector(TokenSeq{}), forge::DataError);
}

TEST_CASE("aa_score matches the population formula") {
  CHECK(aa_score(seq("That 's pretty cool .")) == 0.0);
  CHECK(aa_score(seq("THIS IS MY LIFE ! ! !")) ==
        Catch::Approx(0.8).margin(1e-12));
  CHECK(aa_score(seq("w w w w")) == 0.0);  // single type: documented zero
}

TEST_CASE("aa_score agrees with the brute-force oracle on random sentences") {
  testutil::Rng rng(42);
  const std::vector<std::string> types = {"a", "b", "c", "d", "e",
                                          "f", "g", "!", "|"};
  for (int trial = 0; trial < 300; ++trial) {
    TokenSeq s;
    const int len = 1 + rng.next(60);
    for (int i = 0; i < len; ++i) {
      s.tokens.push_back(types[rng.next(1 + rng.next(types.size()))]);
    }
    const auto fv = word_freq_vector(s).counts;
    CHECK(aa_score(s) == Catch::Approx(testutil::stddev_oracle(fv)).margin(1e-9));
    CHECK(aa_score(s, true) ==
          Catch::Approx(testutil::stddev_oracle(fv, true)).margin(1e-9));

    // permutation invariance
    TokenSeq shuffled = s;
    for (std::size_t i = shuffled.tokens.size(); i > 1; --i) {
      std::swap(shuffled.tokens[i - 1], shuffled.tokens[rng.next(i)]);
    }
    CHECK(aa_score(shuffled) == Catch::Approx(aa_score(s)).margin(1e-12));
  }
}

TEST_CASE("filter keeps the paper examples and drops heavy repetition") {
  const TokenSeq shout = seq("THIS IS MY LIFE ! ! !");
  const TokenSeq calm = seq("That 's pretty cool .");
  TokenSeq art;
  for (int i = 0; i < 40; ++i) art.tokens.push_back("│");
  art.tokens.push_back("x");
  art.tokens.push_back("y");
  REQUIRE(word_freq_vector(art).counts == std::vector<long>{40, 1, 1});
  CHECK(aa_score(art) ==
        Catch::Approx(testutil::stddev_oracle({40, 1, 1})).margin(1e-9));
  CHECK(aa_score(art) > 18.0);

  const auto [kept, report] = filter_ascii_art({shout, calm, art}, 6.0);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].tokens == shout.tokens);
  CHECK(kept[1].tokens == calm.tokens);
  CHECK(report.kept == 2);
  CHECK(report.discarded == 1);
  CHECK(report.kept + report.discarded == 3);
  CHECK(report.sigmas.size() == 3);
}

TEST_CASE("boundary sigma equal to the threshold is kept") {
  // [1, 5]: mean 3, population variance 4, sigma exactly 2
  const TokenSeq s = seq("a b b b b b");
  REQUIRE(aa_score(s) == Catch::Approx(2.0).margin(1e-12));
  const auto [kept, report] = filter_ascii_art({s}, 2.0);
  CHECK(kept.size() == 1);
  CHECK(report.discarded == 0);
}

TEST_CASE("empty corpus filters to an empty report") {
  const auto [kept, report] = filter_ascii_art({}, 6.0);
  CHECK(kept.empty());
  CHECK(report.kept == 0);
  CHECK(report.discarded == 0);
}

TEST_CASE("filter is monotone in the threshold") {
  testutil::Rng rng(7);
  std::vector<TokenSeq> corpus;
  for (int i = 0; i < 100; ++i) {
    TokenSeq s;
    const int reps = 1 + rng.next(30);
    for (int k = 0; k < reps; ++k) s.tokens.push_back("~");
    for (int k = 0; k < 3; ++k) s.tokens.push_back("t" + std::to_string(rng.next(5)));
    corpus.push_back(std::move(s));
  }
  const auto [kept_tight, r1] = filter_ascii_art(corpus, 2.0);
  const auto [kept_loose, r2] = filter_ascii_art(corpus, 8.0);
  CHECK(kept_tight.size() <= kept_loose.size());
  // every sentence kept at the tight threshold is kept at the loose one
  std::size_t j = 0;
  for (const auto& s : kept_tight) {
    while (j < kept_loose.size() && !(kept_loose[j] == s)) ++j;
    REQUIRE(j < kept_loose.size());
    ++j;
  }
}
