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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "forge/error.hpp"
#include "forge/lineio.hpp"
#include "forge/token.hpp"

namespace forge {

inline constexpr const char* kUnkToken = "<unk>";
inline constexpr const char* kBosToken = "<s>";
inline constexpr const char* kEosToken = "</s>";

// Interpolated absolute-discounting n-gram model.
//
//   P_k(w|h) = max(c(hw) - D, 0)/c(h) + D * N1+(h)/c(h) * P_{k-1}(w|h')
//
// grounded in the uniform distribution over the vocabulary (all seen types
// plus </s> and <unk>).  For any observed context the probabilities sum to
// one exactly; unseen contexts back off fully.  Natural log internally,
// log base 10 in the persisted file.
class NgramModel {
 public:
  struct TrainOptions {
    std::size_t order = 3;
    double discount = 0.75;
    bool unk_from_singletons = false;  // map singleton types to <unk>
  };

  static constexpr double kProbFloor = 1e-10;

  static NgramModel train(const std::vector<TokenSeq>& corpus,
                          const TrainOptions& opts) {
    if (corpus.empty()) throw DataError("lm: empty training corpus");
    if (opts.order < 1) throw UsageError("lm: order must be >= 1");
    if (opts.discount < 0.0 || opts.discount >= 1.0) {
      throw UsageError("lm: discount must be in [0, 1)");
    }
    NgramModel model;
    model.order_ = opts.order;
    model.discount_ = opts.discount;

    std::unordered_map<std::string, long> unigram_counts;
    if (opts.unk_from_singletons) {
      for (const auto& sent : corpus) {
        for (const auto& tok : sent.tokens) ++unigram_counts[tok];
      }
    }
    auto mapped = [&](const std::string& tok) -> const std::string& {
      static const std::string unk = kUnkToken;
      if (opts.unk_from_singletons) {
        const auto it = unigram_counts.find(tok);
        if (it != unigram_counts.end() && it->second <= 1) return unk;
      }
      return tok;
    };

    model.counts_.assign(opts.order + 1, {});
    for (const auto& sent : corpus) {
      std::vector<std::string> ws;
      ws.reserve(sent.size() + opts.order);
      for (std::size_t i = 0; i + 1 < opts.order; ++i) ws.push_back(kBosToken);
      for (const auto& tok : sent.tokens) {
        ws.push_back(mapped(tok));
        model.vocab_.insert(ws.back());
      }
      ws.push_back(kEosToken);
      for (std::size_t i = opts.order - 1; i < ws.size(); ++i) {
        for (std::size_t k = 1; k <= opts.order && k <= i + 1; ++k) {
          ++model.counts_[k][join(ws, i - k + 1, i + 1)];
        }
      }
    }
    model.vocab_.insert(kEosToken);
    model.vocab_.insert(kUnkToken);
    model.finalize();
    return model;
  }

  std::size_t order() const { return order_; }
  double discount() const { return discount_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  const std::unordered_set<std::string>& vocab() const { return vocab_; }

  // P(w | context), with `context` being up to order-1 preceding tokens
  // (older first).  OOV words are looked up as <unk>.
  double prob(const std::string& word,
              const std::vector<std::string>& context) const {
    const std::string& w = vocab_.count(word) ? word : kUnkToken;
    double p = 1.0 / static_cast<double>(vocab_.size());
    for (std::size_t k = 1; k <= order_; ++k) {
      if (k > context.size() + 1) break;
      const std::string ctx = join(context, context.size() - (k - 1), context.size());
      const auto tot_it = ctx_total_[k].find(ctx);
      if (tot_it == ctx_total_[k].end()) continue;  // full backoff
      const double tot = static_cast<double>(tot_it->second);
      const auto cnt_it =
          counts_[k].find(ctx.empty() ? w : ctx + ' ' + w);
      const double c =
          cnt_it == counts_[k].end() ? 0.0 : static_cast<double>(cnt_it->second);
      const double n1p = static_cast<double>(ctx_types_[k].at(ctx));
      p = std::max(c - discount_, 0.0) / tot + discount_ * n1p / tot * p;
    }
    return std::max(p, kProbFloor);
  }

  struct Score {
    double total = 0.0;      // sum of natural-log probabilities incl. </s>
    double per_token = 0.0;  // total / (token count + 1)
  };

  Score score(const TokenSeq& s) const {
    std::vector<std::string> hist;
    for (std::size_t i = 0; i + 1 < order_; ++i) hist.push_back(kBosToken);
    Score result;
    auto push = [&](const std::string& w) {
      result.total += std::log(prob(w, hist));
      if (order_ > 1) {
        hist.push_back(vocab_.count(w) ? w : kUnkToken);
        if (hist.size() > order_ - 1) hist.erase(hist.begin());
      }
    };
    for (const auto& tok : s.tokens) push(tok);
    push(kEosToken);
    result.per_token = result.total / (static_cast<double>(s.size()) + 1.0);
    return result;
  }

  double perplexity(const std::vector<TokenSeq>& corpus) const {
    if (corpus.empty()) throw DataError("lm: empty corpus for perplexity");
    double total = 0.0;
    double events = 0.0;
    for (const auto& sent : corpus) {
      total += score(sent).total;
      events += static_cast<double>(sent.size()) + 1.0;
    }
    return std::exp(-total / events);
  }

  // Sectioned text format: counts blocks reconstruct the model exactly;
  // probs blocks mirror the conditional probabilities in log base 10 for
  // inspection.
  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open lm for writing: " + path);
    out << "#nglm v1 order=" << order_ << '\n';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", discount_);
    out << "#discount " << buf << '\n';
    for (std::size_t k = 1; k <= order_; ++k) {
      out << "\\counts " << k << '\n';
      const std::map<std::string, long> sorted(counts_[k].begin(),
                                               counts_[k].end());
      for (const auto& [gram, count] : sorted) {
        out << count << '\t' << gram << '\n';
      }
    }
    for (std::size_t k = 1; k <= order_; ++k) {
      out << "\\probs " << k << '\n';
      const std::map<std::string, long> sorted(counts_[k].begin(),
                                               counts_[k].end());
      for (const auto& [gram, count] : sorted) {
        (void)count;
        const std::size_t cut = gram.rfind(' ');
        std::vector<std::string> ctx;
        std::string w = gram;
        if (cut != std::string::npos) {
          ctx = split(gram.substr(0, cut));
          w = gram.substr(cut + 1);
        }
        // conditional at this gram's own order, via the full interpolation
        std::snprintf(buf, sizeof(buf), "%.6f", std::log10(prob(w, ctx)));
        out << buf << '\t' << gram << '\n';
      }
    }
    out << "\\end\n";
  }

  static NgramModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open lm: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty lm file: " + path);
    chomp_cr(line);
    NgramModel model;
    if (std::sscanf(line.c_str(), "#nglm v1 order=%zu", &model.order_) != 1 ||
        model.order_ < 1) {
      throw DataError("bad lm header in " + path, 1);
    }
    model.counts_.assign(model.order_ + 1, {});
    std::size_t line_no = 1;
    std::size_t section = 0;  // counts order being read; 0 = none
    bool in_counts = false;
    while (std::getline(in, line)) {
      ++line_no;
      chomp_cr(line);
      if (line.empty()) continue;
      if (line.rfind("#discount ", 0) == 0) {
        try {
          model.discount_ = std::stod(line.substr(10));
        } catch (const std::exception&) {
          throw DataError("bad discount in " + path, line_no);
        }
        continue;
      }
      if (line[0] == '\\') {
        if (line == "\\end") break;
        std::size_t k = 0;
        if (std::sscanf(line.c_str(), "\\counts %zu", &k) == 1) {
          if (k < 1 || k > model.order_) {
            throw DataError("counts section out of range in " + path, line_no);
          }
          section = k;
          in_counts = true;
        } else if (std::sscanf(line.c_str(), "\\probs %zu", &k) == 1) {
          in_counts = false;  // probs blocks are informational
        } else {
          throw DataError("unknown section in " + path, line_no);
        }
        continue;
      }
      if (!in_counts) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos || section == 0) {
        throw DataError("malformed lm row in " + path, line_no);
      }
      long count = 0;
      try {
        count = std::stol(line.substr(0, tab));
      } catch (const std::exception&) {
        throw DataError("bad lm count in " + path, line_no);
      }
      if (count <= 0) throw DataError("non-positive lm count in " + path, line_no);
      const std::string gram = line.substr(tab + 1);
      model.counts_[section][gram] = count;
      if (section == 1) model.vocab_.insert(gram);
    }
    model.vocab_.insert(kUnkToken);
    model.vocab_.insert(kEosToken);
    model.vocab_.erase(kBosToken);
    model.finalize();
    return model;
  }

 private:
  static std::string join(const std::vector<std::string>& ws, std::size_t lo,
                          std::size_t hi) {
    std::string out;
    for (std::size_t i = lo; i < hi; ++i) {
      if (i > lo) out.push_back(' ');
      out += ws[i];
    }
    return out;
  }

  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
      std::size_t end = s.find(' ', start);
      if (end == std::string::npos) end = s.size();
      if (end > start) out.push_back(s.substr(start, end - start));
      start = end + 1;
    }
    return out;
  }

  void finalize() {
    ctx_total_.assign(order_ + 1, {});
    ctx_types_.assign(order_ + 1, {});
    for (std::size_t k = 1; k <= order_; ++k) {
      for (const auto& [gram, count] : counts_[k]) {
        const std::size_t cut = gram.rfind(' ');
        const std::string ctx =
            cut == std::string::npos ? std::string() : gram.substr(0, cut);
        ctx_total_[k][ctx] += count;
        ++ctx_types_[k][ctx];
      }
    }
  }

  std::size_t order_ = 3;
  double discount_ = 0.75;
  std::vector<std::unordered_map<std::string, long>> counts_;
  std::vector<std::unordered_map<std::string, long>> ctx_total_;
  std::vector<std::unordered_map<std::string, long>> ctx_types_;
  std::unordered_set<std::string> vocab_;
};

}  // namespace forge
