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

#include <array>
#include <sstream>

#include "forge/qefilter.hpp"
#include "helpers.hpp"

using forge::AlignModel;
using forge::NgramModel;
using forge::ScoredPair;
using forge::score_pairs;
using forge::TokenSeq;
using forge::zscore_filter;
using testutil::seq;

namespace {

// 50 synthetic pairs built from five aligned patterns, with one planted
// garbage pair.  Models train on twenty repetitions of the clean patterns.
struct Fixture {
  std::vector<std::pair<TokenSeq, TokenSeq>> pairs;
  std::size_t garbage_index = 24;
  NgramModel src_lm;
  NgramModel tgt_lm;
  AlignModel am;
};

const std::vector<std::pair<std::string, std::string>>& patterns() {
  static const std::vector<std::pair<std::string, std::string>> p = {
      {"le chat dort sur le lit", "the cat sleeps on the bed"},
      {"le chien court dans le parc", "the dog runs in the park"},
      {"la maison est grande", "the house is big"},
      {"le chat court dans le parc", "the cat runs in the park"},
      {"la maison est petite", "the house is small"},
  };
  return p;
}

Fixture make_fixture() {
  std::vector<TokenSeq> src_train, tgt_train;
  std::vector<std::pair<TokenSeq, TokenSeq>> train_pairs;
  for (int rep = 0; rep < 20; ++rep) {
    for (const auto& [f, e] : patterns()) {
      src_train.push_back(seq(f));
      tgt_train.push_back(seq(e));
      train_pairs.push_back({seq(f), seq(e)});
    }
  }
  NgramModel::TrainOptions lm_opts;
  lm_opts.order = 2;
  AlignModel::TrainOptions am_opts;
  am_opts.iterations = 10;

  Fixture fx = {.pairs = {},
                .garbage_index = 24,
                .src_lm = NgramModel::train(src_train, lm_opts),
                .tgt_lm = NgramModel::train(tgt_train, lm_opts),
                .am = AlignModel::train(train_pairs, am_opts)};
  for (int i = 0; i < 50; ++i) {
    if (i == static_cast<int>(fx.garbage_index)) {
      fx.pairs.push_back({seq("zxqv blorp zz"), seq("wibble wobble qq xx")});
    } else {
      const auto& [f, e] = patterns()[i % 5];
      fx.pairs.push_back({seq(f), seq(e)});
    }
  }
  return fx;
}

}  // namespace

TEST_CASE("scoring is deterministic") {
  const Fixture fx = make_fixture();
  const auto once = score_pairs(fx.src_lm, fx.tgt_lm, fx.am, fx.pairs);
  const auto twice = score_pairs(fx.src_lm, fx.tgt_lm, fx.am, fx.pairs);
  REQUIRE(once.size() == twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(once[i].s_lm == twice[i].s_lm);
    CHECK(once[i].t_lm == twice[i].t_lm);
    CHECK(once[i].a_score == twice[i].a_score);
  }
  CHECK(score_pairs(fx.src_lm, fx.tgt_lm, fx.am, {}).empty());
}

TEST_CASE("the garbage pair scores below the corpus mean") {
  const Fixture fx = make_fixture();
  const auto scored = score_pairs(fx.src_lm, fx.tgt_lm, fx.am, fx.pairs);
  double mean_t_lm = 0.0;
  for (const auto& sp : scored) mean_t_lm += sp.t_lm;
  mean_t_lm /= static_cast<double>(scored.size());
  CHECK(scored[fx.garbage_index].t_lm < mean_t_lm);
  CHECK(scored[fx.garbage_index].s_lm < mean_t_lm);
}

TEST_CASE("exactly the planted pair is rejected at multiplier two") {
  const Fixture fx = make_fixture();
  auto scored = score_pairs(fx.src_lm, fx.tgt_lm, fx.am, fx.pairs);
  const auto [kept, report] = zscore_filter(scored, 2.0);
  CHECK(kept.size() == 49);
  CHECK(report.kept == 49);
  CHECK(report.total == 50);
  for (std::size_t i = 0; i < scored.size(); ++i) {
    CHECK(scored[i].kept == (i != fx.garbage_index));
  }
  // kept order is preserved
  std::size_t j = 0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (!scored[i].kept) continue;
    REQUIRE(j < kept.size());
    CHECK(kept[j].src.tokens == scored[i].src.tokens);
    ++j;
  }
}

TEST_CASE("decisions match the brute-force z-score oracle") {
  const Fixture fx = make_fixture();
  auto scored = score_pairs(fx.src_lm, fx.tgt_lm, fx.am, fx.pairs);
  std::vector<std::array<double, 3>> features;
  for (const auto& sp : scored) {
    features.push_back({sp.s_lm, sp.t_lm, sp.a_score});
  }
  for (double mult : {0.5, 1.0, 2.0, 3.0, 10.0}) {
    auto copy = scored;
    const auto [kept, report] = zscore_filter(copy, mult);
    const auto oracle = testutil::zscore_keep_oracle(features, mult);
    for (std::size_t i = 0; i < copy.size(); ++i) {
      INFO("multiplier " << mult << " pair " << i);
      CHECK(copy[i].kept == oracle[i]);
    }
  }
}

TEST_CASE("identical scores keep everything") {
  std::vector<ScoredPair> scored(5);
  for (auto& sp : scored) {
    sp.src = seq("a b");
    sp.tgt = seq("x y");
    sp.s_lm = -1.25;
    sp.t_lm = -0.75;
    sp.a_score = -2.0;
  }
  const auto [kept, report] = zscore_filter(scored, 2.0);
  CHECK(kept.size() == 5);
  CHECK(report.rejected_s_lm == 0);
  CHECK(report.rejected_t_lm == 0);
  CHECK(report.rejected_a == 0);
}

TEST_CASE("a huge multiplier keeps everything") {
  const Fixture fx = make_fixture();
  auto scored = score_pairs(fx.src_lm, fx.tgt_lm, fx.am, fx.pairs);
  const auto [kept, report] = zscore_filter(scored, 1e6);
  CHECK(kept.size() == fx.pairs.size());
}

TEST_CASE("the filter is monotone in the multiplier") {
  const Fixture fx = make_fixture();
  const auto scored = score_pairs(fx.src_lm, fx.tgt_lm, fx.am, fx.pairs);
  std::size_t prev = 0;
  for (double mult : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 1e6}) {
    auto copy = scored;
    const auto [kept, report] = zscore_filter(copy, mult);
    CHECK(kept.size() >= prev);
    prev = kept.size();
  }
}

TEST_CASE("duplicating a kept pair does not evict others on the fixture") {
  const Fixture fx = make_fixture();
  auto scored = score_pairs(fx.src_lm, fx.tgt_lm, fx.am, fx.pairs);
  const auto [kept_before, r1] = zscore_filter(scored, 2.0);

  auto pairs2 = fx.pairs;
  pairs2.push_back(fx.pairs[0]);  // duplicate a clean pair
  auto scored2 = score_pairs(fx.src_lm, fx.tgt_lm, fx.am, pairs2);
  const auto [kept_after, r2] = zscore_filter(scored2, 2.0);
  // sigma must not have grown for the precondition to apply
  for (int f = 0; f < 3; ++f) CHECK(r2.sigma[f] <= r1.sigma[f] + 1e-12);
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].kept) CHECK(scored2[i].kept);
  }
}

TEST_CASE("scoring rejects an empty side naming the line") {
  const Fixture fx = make_fixture();
  auto pairs = fx.pairs;
  pairs[2].second.tokens.clear();
  try {
    score_pairs(fx.src_lm, fx.tgt_lm, fx.am, pairs);
    FAIL("expected DataError");
  } catch (const forge::DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("filter validates its inputs") {
  std::vector<ScoredPair> empty;
  CHECK_THROWS_AS(zscore_filter(empty, 2.0), forge::DataError);
  std::vector<ScoredPair> one(1);
  CHECK_THROWS_AS(zscore_filter(one, 0.0), forge::UsageError);
}

TEST_CASE("the report file is a pinned TSV") {
  std::vector<ScoredPair> scored(2);
  scored[0].s_lm = -1.0;
  scored[0].t_lm = -2.0;
  scored[0].a_score = -3.0;
  scored[0].kept = true;
  scored[1].s_lm = -4.5;
  scored[1].t_lm = -5.25;
  scored[1].a_score = -6.125;
  scored[1].kept = false;
  std::ostringstream out;
  forge::write_filter_report(out, scored);
  CHECK(out.str() ==
        "line_no\ts_lm\tt_lm\ta_score\tkept\n"
        "1\t-1.000000\t-2.000000\t-3.000000\t1\n"
        "2\t-4.500000\t-5.250000\t-6.125000\t0\n");
}
