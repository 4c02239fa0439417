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
#include <vector>

#include "forge/error.hpp"
#include "forge/lineio.hpp"
#include "forge/token.hpp"

namespace forge {

inline constexpr const char* kNullToken = "<NULL>";

// Lexical translation table t(f|e) for IBM Model 1, including a
// distinguished NULL source token.  Rows are normalized: for every source
// token e, the probabilities over target tokens sum to 1.
class AlignModel {
 public:
  struct TrainOptions {
    std::size_t iterations = 10;
    // The NULL row stays at its uniform initialization unless this is set.
    // Reestimating NULL lets it absorb probability mass that competes with
    // real source words, which slows convergence on small corpora.
    bool reestimate_null = false;
  };

  struct TrainStats {
    std::vector<double> log_likelihood;  // one entry per EM iteration
    std::size_t skipped_pairs = 0;       // pairs with an empty side
  };

  static constexpr double kFloorProb = 1e-9;

  // EM training with NULL: uniform initialization over cooccurring pairs,
  // expected-count E-step, renormalizing M-step.  The recorded corpus
  // log-likelihood is non-decreasing across iterations.
  static AlignModel train(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs,
                          const TrainOptions& opts, TrainStats* stats = nullptr) {
    if (pairs.empty()) throw DataError("align: empty training pair list");
    if (opts.iterations < 1) throw UsageError("align: iterations must be >= 1");
    AlignModel model;
    std::size_t skipped = 0;
    // uniform init over cooccurring (e, f)
    std::map<std::string, std::map<std::string, double>> table;
    for (const auto& [src, tgt] : pairs) {
      if (src.empty() || tgt.empty()) {
        ++skipped;
        continue;
      }
      for (const auto& f : tgt.tokens) {
        table[kNullToken][f] = 0.0;
        for (const auto& e : src.tokens) table[e][f] = 0.0;
      }
    }
    if (table.empty()) throw DataError("align: every pair has an empty side");
    for (auto& [e, row] : table) {
      const double u = 1.0 / static_cast<double>(row.size());
      for (auto& [f, p] : row) p = u;
    }
    for (std::size_t iter = 0; iter < opts.iterations; ++iter) {
      std::map<std::string, std::map<std::string, double>> counts;
      std::map<std::string, double> totals;
      double ll = 0.0;
      for (const auto& [src, tgt] : pairs) {
        if (src.empty() || tgt.empty()) continue;
        const double norm = 1.0 / (static_cast<double>(src.size()) + 1.0);
        for (const auto& f : tgt.tokens) {
          double denom = table[kNullToken][f];
          for (const auto& e : src.tokens) denom += table[e][f];
          ll += std::log(denom * norm);
          auto accumulate = [&](const std::string& e) {
            const double p = table[e][f];
            if (p > 0.0) {
              counts[e][f] += p / denom;
              totals[e] += p / denom;
            }
          };
          accumulate(kNullToken);
          for (const auto& e : src.tokens) accumulate(e);
        }
      }
      for (auto& [e, row] : table) {
        if (!opts.reestimate_null && e == kNullToken) continue;
        const double total = totals[e];
        if (total <= 0.0) continue;
        for (auto& [f, p] : row) p = counts[e][f] / total;
      }
      if (stats != nullptr) stats->log_likelihood.push_back(ll);
    }
    if (stats != nullptr) stats->skipped_pairs = skipped;
    for (auto& [e, row] : table) {
      auto& dst = model.t_[e];
      for (auto& [f, p] : row) {
        if (p > 0.0) dst.emplace(f, p);
      }
    }
    return model;
  }

  // t(f|e) with a floor for unseen pairs, so forced scoring never hits
  // log(0).
  double prob(const std::string& src_token, const std::string& tgt_token) const {
    const auto row = t_.find(src_token);
    if (row == t_.end()) return kFloorProb;
    const auto it = row->second.find(tgt_token);
    if (it == row->second.end()) return kFloorProb;
    return std::max(it->second, kFloorProb);
  }

  // Length-normalized log P(tgt|src): for each target word, the mean of
  // t(f|e) over NULL and all source tokens, logged and averaged over the
  // target length.  Invariant under permutation of the source.
  double score(const TokenSeq& src, const TokenSeq& tgt) const {
    if (tgt.empty()) throw DataError("align: cannot score an empty target");
    const double norm = 1.0 / (static_cast<double>(src.size()) + 1.0);
    double total = 0.0;
    for (const auto& f : tgt.tokens) {
      double sum = prob(kNullToken, f);
      for (const auto& e : src.tokens) sum += prob(e, f);
      total += std::log(sum * norm);
    }
    return total / static_cast<double>(tgt.size());
  }

  // Hard alignment: each target position links to the source position with
  // the highest t; ties break toward NULL (index -1) then the smallest
  // source index.  NULL links are omitted.
  std::vector<std::pair<std::size_t, std::size_t>> viterbi(
      const TokenSeq& src, const TokenSeq& tgt) const {
    std::vector<std::pair<std::size_t, std::size_t>> links;
    for (std::size_t j = 0; j < tgt.tokens.size(); ++j) {
      double best = prob(kNullToken, tgt.tokens[j]);
      std::ptrdiff_t best_i = -1;
      for (std::size_t i = 0; i < src.tokens.size(); ++i) {
        const double p = prob(src.tokens[i], tgt.tokens[j]);
        if (p > best) {
          best = p;
          best_i = static_cast<std::ptrdiff_t>(i);
        }
      }
      if (best_i >= 0) links.emplace_back(static_cast<std::size_t>(best_i), j);
    }
    return links;
  }

  // Row sums for the normalization invariant; diagnostic.
  std::map<std::string, double> row_sums() const {
    std::map<std::string, double> sums;
    for (const auto& [e, row] : t_) {
      double s = 0.0;
      for (const auto& [f, p] : row) s += p;
      sums[e] = s;
    }
    return sums;
  }

  std::size_t entries() const {
    std::size_t n = 0;
    for (const auto& [e, row] : t_) n += row.size();
    return n;
  }

  // TSV: src_token<TAB>tgt_token<TAB>prob with a #m1 v1 header.
  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open align model for writing: " + path);
    out << "#m1 v1\n";
    char buf[64];
    for (const auto& [e, row] : t_) {
      for (const auto& [f, p] : row) {
        std::snprintf(buf, sizeof(buf), "%.12g", p);
        out << e << '\t' << f << '\t' << buf << '\n';
      }
    }
  }

  static AlignModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open align model: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty align model: " + path);
    chomp_cr(line);
    if (line != "#m1 v1") throw DataError("bad align model header in " + path, 1);
    AlignModel model;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      chomp_cr(line);
      if (line.empty()) continue;
      const auto t1 = line.find('\t');
      const auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
      if (t1 == std::string::npos || t2 == std::string::npos) {
        throw DataError("malformed align model row in " + path, line_no);
      }
      double p = 0.0;
      try {
        p = std::stod(line.substr(t2 + 1));
      } catch (const std::exception&) {
        throw DataError("bad probability in " + path, line_no);
      }
      if (p < 0.0 || p > 1.0 + 1e-9) {
        throw DataError("probability out of range in " + path, line_no);
      }
      model.t_[line.substr(0, t1)].emplace(line.substr(t1 + 1, t2 - t1 - 1), p);
    }
    return model;
  }

 private:
  std::unordered_map<std::string, std::unordered_map<std::string, double>> t_;
};

}  // namespace forge
