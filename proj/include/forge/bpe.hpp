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

#pragma once

#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "forge/error.hpp"
#include "forge/lineio.hpp"
#include "forge/token.hpp"
#include "forge/utf8.hpp"

namespace forge {

inline constexpr std::string_view kBpeEndOfWord = "</w>";
inline constexpr std::string_view kBpeDefaultMarker = "@@";

// Tokens that must never be segmented.
inline bool is_reserved_token(std::string_view tok) {
  return tok == "<PH>" || tok == "&lt;PH&gt;" || tok == "<s>" ||
         tok == "</s>" || tok == "<unk>" || tok == "<NULL>";
}

// Ordered list of learned merge rules plus the continuation marker carried
// by non-final subword pieces.  Application replays merges in training
// order, so a longer prefix of the same training run never segments a
// token more finely than a shorter one.
class BpeModel {
 public:
  BpeModel() = default;
  explicit BpeModel(std::vector<std::pair<std::string, std::string>> merges,
                    std::string marker = std::string(kBpeDefaultMarker))
      : merges_(std::move(merges)), marker_(std::move(marker)) {
    for (std::size_t r = 0; r < merges_.size(); ++r) {
      rank_.emplace(merges_[r].first + "\x1f" + merges_[r].second, r);
    }
  }

  const std::vector<std::pair<std::string, std::string>>& merges() const {
    return merges_;
  }
  const std::string& marker() const { return marker_; }

  // Learns merges from word counts.  Pair selection: highest corpus count,
  // ties to the lexicographically smallest pair, with the bare end-of-word
  // sentinel ordered after every other symbol.  Stops early once no pair
  // occurs at least twice.  Counts are maintained incrementally (only
  // words containing the chosen pair are touched) with a lazy max-heap of
  // candidates, so training scales to large merge budgets.
  static BpeModel train(const std::map<std::string, long>& vocab,
                        std::size_t num_merges,
                        std::string marker = std::string(kBpeDefaultMarker)) {
    if (num_merges < 1) throw UsageError("bpe: num_merges must be >= 1");
    if (vocab.empty()) throw DataError("bpe: empty training vocabulary");
    using Pair = std::pair<std::string, std::string>;
    struct Word {
      std::vector<std::string> syms;
      long count;
    };
    std::vector<Word> words;
    words.reserve(vocab.size());
    for (const auto& [word, count] : vocab) {
      Word w;
      w.count = count;
      std::size_t pos = 0;
      while (pos < word.size()) {
        const std::size_t start = pos;
        utf8::next(word, pos);
        w.syms.emplace_back(word.substr(start, pos - start));
      }
      w.syms.emplace_back(kBpeEndOfWord);
      words.push_back(std::move(w));
    }
    // bare "</w>" sorts after any other symbol; composites sort as strings
    auto sym_less = [](const std::string& a, const std::string& b) {
      const bool ae = a == kBpeEndOfWord;
      const bool be = b == kBpeEndOfWord;
      if (ae != be) return be;
      return a < b;
    };
    auto pair_less = [&sym_less](const Pair& a, const Pair& b) {
      if (a.first != b.first) return sym_less(a.first, b.first);
      return sym_less(a.second, b.second);
    };

    std::map<Pair, long> counts;
    std::map<Pair, std::set<std::size_t>> occurs;  // may hold stale ids
    struct Candidate {
      long count;
      Pair pair;
    };
    // max-heap: larger count first, then lexicographically smaller pair
    auto worse = [&pair_less](const Candidate& a, const Candidate& b) {
      if (a.count != b.count) return a.count < b.count;
      return pair_less(b.pair, a.pair);
    };
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)>
        heap(worse);

    auto bump = [&](const Pair& p, long delta, std::size_t wi) {
      const long now = counts[p] += delta;
      if (delta > 0) occurs[p].insert(wi);
      heap.push({now, p});
    };
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      const auto& syms = words[wi].syms;
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        bump({syms[i], syms[i + 1]}, words[wi].count, wi);
      }
    }

    std::vector<Pair> merges;
    std::set<Pair> merged_already;
    while (merges.size() < num_merges && !heap.empty()) {
      const Candidate top = heap.top();
      heap.pop();
      const auto it = counts.find(top.pair);
      if (it == counts.end() || it->second != top.count) continue;  // stale
      if (merged_already.count(top.pair)) continue;
      if (top.count < 2) break;
      const auto& [left, right] = top.pair;
      merges.push_back(top.pair);
      merged_already.insert(top.pair);
      const std::string merged = left + right;

      auto affected = std::move(occurs[top.pair]);
      occurs.erase(top.pair);
      for (const std::size_t wi : affected) {
        auto& w = words[wi];
        bool contains = false;
        for (std::size_t i = 0; i + 1 < w.syms.size(); ++i) {
          if (w.syms[i] == left && w.syms[i + 1] == right) {
            contains = true;
            break;
          }
        }
        if (!contains) continue;  // stale occurrence entry
        for (std::size_t i = 0; i + 1 < w.syms.size(); ++i) {
          bump({w.syms[i], w.syms[i + 1]}, -w.count, wi);
        }
        std::vector<std::string> out;
        out.reserve(w.syms.size());
        std::size_t i = 0;
        while (i < w.syms.size()) {
          if (i + 1 < w.syms.size() && w.syms[i] == left &&
              w.syms[i + 1] == right) {
            out.push_back(merged);
            i += 2;
          } else {
            out.push_back(std::move(w.syms[i]));
            ++i;
          }
        }
        w.syms = std::move(out);
        for (std::size_t k = 0; k + 1 < w.syms.size(); ++k) {
          bump({w.syms[k], w.syms[k + 1]}, w.count, wi);
        }
      }
    }
    return BpeModel(std::move(merges), std::move(marker));
  }

  // Builds the joint vocabulary of one or two corpora and trains.
  static BpeModel train_joint(const std::vector<TokenSeq>& corpus_a,
                              const std::vector<TokenSeq>* corpus_b,
                              std::size_t num_merges,
                              std::string marker = std::string(kBpeDefaultMarker)) {
    std::map<std::string, long> vocab;
    auto absorb = [&vocab](const std::vector<TokenSeq>& corpus) {
      for (const auto& sent : corpus) {
        for (const auto& tok : sent.tokens) {
          if (!is_reserved_token(tok)) ++vocab[tok];
        }
      }
    };
    absorb(corpus_a);
    if (corpus_b != nullptr) absorb(*corpus_b);
    return train(vocab, num_merges, std::move(marker));
  }

  // Segments one token by replaying merges in training order.
  std::vector<std::string> segment(const std::string& token) const {
    if (is_reserved_token(token)) return {token};
    std::vector<std::string> syms;
    std::size_t pos = 0;
    while (pos < token.size()) {
      const std::size_t start = pos;
      utf8::next(token, pos);
      syms.emplace_back(token.substr(start, pos - start));
    }
    if (syms.empty()) return {};
    syms.emplace_back(kBpeEndOfWord);
    std::size_t cursor = 0;
    while (true) {
      std::size_t best = merges_.size();
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        const auto it = rank_.find(syms[i] + "\x1f" + syms[i + 1]);
        if (it != rank_.end() && it->second >= cursor && it->second < best) {
          best = it->second;
        }
      }
      if (best == merges_.size()) break;
      const auto& [left, right] = merges_[best];
      const std::string merged = left + right;
      std::vector<std::string> out;
      out.reserve(syms.size());
      std::size_t i = 0;
      while (i < syms.size()) {
        if (i + 1 < syms.size() && syms[i] == left && syms[i + 1] == right) {
          out.push_back(merged);
          i += 2;
        } else {
          out.push_back(std::move(syms[i]));
          ++i;
        }
      }
      syms = std::move(out);
      cursor = best + 1;
    }
    // strip the sentinel and mark non-final pieces
    if (syms.back() == kBpeEndOfWord) {
      syms.pop_back();
    } else {
      syms.back().resize(syms.back().size() - kBpeEndOfWord.size());
    }
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) syms[i] += marker_;
    return syms;
  }

  TokenSeq apply(const TokenSeq& s) const {
    TokenSeq out;
    out.lang = s.lang;
    for (const auto& tok : s.tokens) {
      for (auto& piece : segment(tok)) out.tokens.push_back(std::move(piece));
    }
    return out;
  }

  // One merge per line, "left right", after a header naming the marker.
  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open bpe model for writing: " + path);
    out << "#bpe v1 marker=" << marker_ << '\n';
    for (const auto& [left, right] : merges_) {
      out << left << ' ' << right << '\n';
    }
  }

  static BpeModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open bpe model: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty bpe model: " + path);
    chomp_cr(line);
    const std::string prefix = "#bpe v1 marker=";
    if (line.rfind(prefix, 0) != 0) {
      throw DataError("bad bpe model header in " + path, 1);
    }
    std::string marker = line.substr(prefix.size());
    if (marker.empty()) throw DataError("empty bpe marker in " + path, 1);
    std::vector<std::pair<std::string, std::string>> merges;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      chomp_cr(line);
      if (line.empty()) continue;
      const std::size_t space = line.find(' ');
      if (space == std::string::npos || space == 0 ||
          space + 1 == line.size()) {
        throw DataError("malformed bpe merge in " + path, line_no);
      }
      merges.emplace_back(line.substr(0, space), line.substr(space + 1));
    }
    return BpeModel(std::move(merges), std::move(marker));
  }

 private:
  std::vector<std::pair<std::string, std::string>> merges_;
  std::string marker_ = std::string(kBpeDefaultMarker);
  std::unordered_map<std::string, std::size_t> rank_;
};

// Joins subword pieces at continuation markers; exact inverse of apply on
// its own output.  A marker on the last token of the sentence is an error
// naming the position.
inline TokenSeq bpe_revert(const TokenSeq& s,
                           std::string_view marker = kBpeDefaultMarker) {
  TokenSeq out;
  out.lang = s.lang;
  std::string pending;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const std::string& tok = s.tokens[i];
    const bool continues =
        tok.size() >= marker.size() &&
        std::string_view(tok).substr(tok.size() - marker.size()) == marker;
    if (continues) {
      pending += tok.substr(0, tok.size() - marker.size());
      if (i + 1 == s.tokens.size()) {
        throw DataError("dangling continuation marker at token " +
                        std::to_string(i + 1));
      }
    } else {
      pending += tok;
      out.tokens.push_back(std::move(pending));
      pending.clear();
    }
  }
  return out;
}

}  // namespace forge
