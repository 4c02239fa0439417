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

#include <cmath>
#include <filesystem>

#include "forge/ngram.hpp"
#include "helpers.hpp"

using forge::NgramModel;
using forge::TokenSeq;
using testutil::corpus;
using testutil::seq;

namespace {

// The fixed 50-sentence fixture: five patterns, ten repetitions each.
std::vector<TokenSeq> fixture50() {
  const std::vector<std::string> patterns = {
      "the cat sat on the mat",      "the dog ran in the park",
      "a bird flew over the tree",   "the cat ran in the park",
      "a dog sat on the mat",
  };
  std::vector<TokenSeq> out;
  for (int i = 0; i < 50; ++i) out.push_back(seq(patterns[i % 5]));
  return out;
}

NgramModel train(const std::vector<TokenSeq>& c, std::size_t order,
                 double discount = 0.75) {
  NgramModel::TrainOptions opts;
  opts.order = order;
  opts.discount = discount;
  return NgramModel::train(c, opts);
}

}  // namespace

TEST_CASE("bigram probability favors the observed continuation") {
  const NgramModel m = train(corpus({"a b", "a b"}), 2);
  // hand computation with discount 0.75:
  //   P1(b)   = (2 - 0.75)/6 + 0.75*(3/6)*(1/4) = 0.3020833...
  //   P(b|a)  = (2 - 0.75)/2 + 0.75*(1/2)*P1(b) = 0.7382812...
  CHECK(m.prob("b", {"a"}) == Catch::Approx(0.73828125).margin(1e-9));
  CHECK(m.prob("b", {"a"}) > 0.5);
  CHECK(m.prob("b", {"a"}) > m.prob("</s>", {"a"}));
}

TEST_CASE("unigram model normalizes over its tiny vocabulary") {
  const NgramModel m = train(corpus({"x"}), 1);
  const double sum = m.prob("x", {}) + m.prob("</s>", {}) + m.prob("<unk>", {});
  CHECK(sum == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("order larger than any sentence trains and backs off") {
  const NgramModel m = train(corpus({"a b", "c"}), 6);
  CHECK(m.order() == 6);
  const auto s = m.score(seq("a b"));
  CHECK(std::isfinite(s.total));
  CHECK(s.total < 0.0);
}

TEST_CASE("observed contexts sum to one across the vocabulary") {
  const auto fixture = fixture50();
  for (std::size_t order : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
    const NgramModel m = train(fixture, order);
    std::vector<std::vector<std::string>> contexts = {{}};
    if (order >= 2) {
      contexts.push_back({"the"});
      contexts.push_back({"on"});
      contexts.push_back({"park"});
    }
    if (order >= 3) {
      contexts.push_back({"the", "cat"});
      contexts.push_back({"on", "the"});
      contexts.push_back({"<s>", "the"});
    }
    for (const auto& ctx : contexts) {
      double sum = 0.0;
      for (const auto& w : m.vocab()) sum += m.prob(w, ctx);
      INFO("order " << order << ", context size " << ctx.size());
      CHECK(sum == Catch::Approx(1.0).margin(1e-6));
    }
  }
}

TEST_CASE("training sentences outscore corrupted ones") {
  const NgramModel m = train(fixture50(), 3);
  const double good = m.score(seq("the cat sat on the mat")).total;
  const double bad = m.score(seq("the cat sat on the zorgle")).total;
  CHECK(good > bad);
}

TEST_CASE("per-token score is the total over length plus one") {
  const NgramModel m = train(fixture50(), 2);
  const auto s = m.score(seq("the cat sat on the mat"));
  CHECK(s.per_token == Catch::Approx(s.total / 7.0).margin(1e-12));
  const auto again = m.score(seq("the cat sat on the mat"));
  CHECK(s.total == again.total);
}

TEST_CASE("empty sentences score just the end marker") {
  const NgramModel m = train(fixture50(), 2);
  const auto s = m.score(TokenSeq{});
  CHECK(std::isfinite(s.total));
  CHECK(s.per_token == Catch::Approx(s.total).margin(1e-12));
}

TEST_CASE("score adds up over independent sentences") {
  const NgramModel m = train(fixture50(), 3);
  const double a = m.score(seq("the cat sat on the mat")).total;
  const double b = m.score(seq("a bird flew over the tree")).total;
  double both = 0.0;
  for (const auto& s : corpus({"the cat sat on the mat",
                               "a bird flew over the tree"})) {
    both += m.score(s).total;
  }
  CHECK(both == Catch::Approx(a + b).margin(1e-12));
}

TEST_CASE("uniform unigram perplexity equals the type count") {
  // every unigram event (a, b, c, </s>) occurs equally often; with the
  // discount disabled the model is exactly uniform over four outcomes
  const auto c = corpus(std::vector<std::string>(5, "a b c"));
  const NgramModel m = train(c, 1, 0.0);
  CHECK(m.perplexity(c) == Catch::Approx(4.0).margin(1e-6));
}

TEST_CASE("perplexity drops as the order grows on the fixture") {
  const auto fixture = fixture50();
  const double p1 = train(fixture, 1).perplexity(fixture);
  const double p2 = train(fixture, 2).perplexity(fixture);
  const double p3 = train(fixture, 3).perplexity(fixture);
  CHECK(p1 >= p2);
  CHECK(p2 >= p3);
  CHECK(p3 > 1.0);
}

TEST_CASE("training perplexity beats a disjoint-vocabulary corpus") {
  const auto fixture = fixture50();
  const NgramModel m = train(fixture, 2);
  const auto alien = corpus({"zz qq ww", "qq zz", "ww ww zz qq"});
  CHECK(m.perplexity(fixture) < m.perplexity(alien));
}

TEST_CASE("unknown words fall back to the unk floor") {
  const NgramModel m = train(corpus({"a b", "b a"}), 1, 0.0);
  // discount 0 leaves no mass for <unk>; the floor keeps scores finite
  CHECK(m.prob("never-seen", {}) == Catch::Approx(1e-10).margin(1e-24));
  CHECK(std::isfinite(m.score(seq("never-seen tokens here")).total));
}

TEST_CASE("singleton mapping moves rare types to unk") {
  NgramModel::TrainOptions opts;
  opts.order = 2;
  opts.unk_from_singletons = true;
  const NgramModel m = NgramModel::train(
      corpus({"the cat", "the cat", "the dog"}), opts);
  // "dog" appeared once, so it trained as <unk>
  CHECK(m.vocab().count("dog") == 0);
  CHECK(m.vocab().count("cat") == 1);
  CHECK(m.prob("dog", {"the"}) == Catch::Approx(m.prob("<unk>", {"the"})).margin(1e-12));
}

TEST_CASE("model file round-trips scores exactly") {
  const auto fixture = fixture50();
  const NgramModel m = train(fixture, 3);
  const auto path = std::filesystem::temp_directory_path() / "forge_lm_test.txt";
  m.save(path.string());
  const NgramModel loaded = NgramModel::load(path.string());
  CHECK(loaded.order() == m.order());
  CHECK(loaded.vocab_size() == m.vocab_size());
  for (const auto& line : {"the cat sat on the mat", "a dog ran over the tree",
                           "unseen words entirely"}) {
    CHECK(loaded.score(seq(line)).total ==
          Catch::Approx(m.score(seq(line)).total).margin(1e-12));
  }
  CHECK(loaded.perplexity(fixture) ==
        Catch::Approx(m.perplexity(fixture)).margin(1e-9));
  std::filesystem::remove(path);
}

TEST_CASE("corrupt model files are rejected with line numbers") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = (dir / "forge_lm_corrupt.txt").string();
  auto write = [&](const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
  };
  write("#wrong header\n");
  CHECK_THROWS_AS(NgramModel::load(path), forge::DataError);
  write("#nglm v1 order=2\n\\counts 1\nnot-a-number\tthe\n");
  CHECK_THROWS_AS(NgramModel::load(path), forge::DataError);
  write("#nglm v1 order=2\n\\counts 9\n2\tthe\n");
  CHECK_THROWS_AS(NgramModel::load(path), forge::DataError);
  write("#nglm v1 order=2\n#discount oops\n");
  CHECK_THROWS_AS(NgramModel::load(path), forge::DataError);
  std::filesystem::remove(path);
}

TEST_CASE("lm training validates its inputs") {
  CHECK_THROWS_AS(NgramModel::train({}, {}), forge::DataError);
  NgramModel::TrainOptions bad;
  bad.order = 0;
  CHECK_THROWS_AS(NgramModel::train(corpus({"a"}), bad), forge::UsageError);
  NgramModel::TrainOptions bad_d;
  bad_d.discount = 1.5;
  CHECK_THROWS_AS(NgramModel::train(corpus({"a"}), bad_d), forge::UsageError);
  const NgramModel m = train(corpus({"a b"}), 2);
  CHECK_THROWS_AS(m.perplexity({}), forge::DataError);
}
