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

// Test-only fixtures and independent oracles.  The oracles deliberately
// reimplement the math with plain loops over dense arrays so they share no
// code with the library implementations they check.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "forge/token.hpp"

namespace testutil {

inline forge::TokenSeq seq(std::initializer_list<std::string> tokens) {
  forge::TokenSeq s;
  s.tokens.assign(tokens.begin(), tokens.end());
  return s;
}

// Splits on single spaces; convenient for writing fixtures as strings.
inline forge::TokenSeq seq(const std::string& spaced) {
  return forge::from_pretokenized(spaced);
}

inline std::vector<forge::TokenSeq> corpus(const std::vector<std::string>& lines) {
  std::vector<forge::TokenSeq> out;
  out.reserve(lines.size());
  for (const auto& line : lines) out.push_back(seq(line));
  return out;
}

// Portable deterministic randomness: raw mt19937 draws only, since the
// standard distributions differ across library implementations.
class Rng {
 public:
  explicit Rng(std::uint32_t s) : gen_(s) {}
  std::uint32_t next(std::uint32_t bound) { return gen_() % bound; }
  bool chance(std::uint32_t percent) { return next(100) < percent; }

 private:
  std::mt19937 gen_;
};

// ----------------------------------------------------------------- oracles

// Population (or sample) standard deviation, straight from the definition.
inline double stddev_oracle(const std::vector<long>& xs, bool sample = false) {
  const double n = static_cast<double>(xs.size());
  if (xs.size() <= 1) return 0.0;
  double sum = 0.0;
  for (long x : xs) sum += static_cast<double>(x);
  const double mean = sum / n;
  double ss = 0.0;
  for (long x : xs) ss += (static_cast<double>(x) - mean) * (static_cast<double>(x) - mean);
  return std::sqrt(ss / (sample ? n - 1.0 : n));
}

// Dense IBM Model 1 EM over integer-mapped vocabularies.  Index 0 of the
// source vocabulary is NULL.  The NULL row keeps its uniform
// initialization unless reestimate_null is set, mirroring the declared
// training convention.
struct M1Oracle {
  std::vector<std::string> src_vocab;  // [0] == "<NULL>"
  std::vector<std::string> tgt_vocab;
  std::vector<std::vector<double>> t;  // t[e][f]
  std::vector<double> log_likelihood;

  static M1Oracle train(const std::vector<std::pair<std::vector<std::string>,
                                                    std::vector<std::string>>>& pairs,
                        int iterations, bool reestimate_null = false) {
    M1Oracle o;
    o.src_vocab.push_back("<NULL>");
    std::map<std::string, int> src_id{{"<NULL>", 0}};
    std::map<std::string, int> tgt_id;
    auto sid = [&](const std::string& w) {
      auto [it, fresh] = src_id.emplace(w, static_cast<int>(o.src_vocab.size()));
      if (fresh) o.src_vocab.push_back(w);
      return it->second;
    };
    auto tid = [&](const std::string& w) {
      auto [it, fresh] = tgt_id.emplace(w, static_cast<int>(o.tgt_vocab.size()));
      if (fresh) o.tgt_vocab.push_back(w);
      return it->second;
    };
    std::vector<std::pair<std::vector<int>, std::vector<int>>> ipairs;
    for (const auto& [s, tt] : pairs) {
      std::vector<int> is, it;
      for (const auto& w : s) is.push_back(sid(w));
      for (const auto& w : tt) it.push_back(tid(w));
      ipairs.push_back({is, it});
    }
    const int E = static_cast<int>(o.src_vocab.size());
    const int F = static_cast<int>(o.tgt_vocab.size());
    std::vector<std::vector<bool>> cooc(E, std::vector<bool>(F, false));
    for (const auto& [is, it] : ipairs) {
      for (int f : it) {
        cooc[0][f] = true;
        for (int e : is) cooc[e][f] = true;
      }
    }
    o.t.assign(E, std::vector<double>(F, 0.0));
    for (int e = 0; e < E; ++e) {
      int n = 0;
      for (int f = 0; f < F; ++f) n += cooc[e][f] ? 1 : 0;
      for (int f = 0; f < F; ++f) {
        if (cooc[e][f]) o.t[e][f] = 1.0 / n;
      }
    }
    for (int iter = 0; iter < iterations; ++iter) {
      std::vector<std::vector<double>> count(E, std::vector<double>(F, 0.0));
      std::vector<double> total(E, 0.0);
      double ll = 0.0;
      for (const auto& [is, it] : ipairs) {
        for (int f : it) {
          double denom = o.t[0][f];
          for (int e : is) denom += o.t[e][f];
          ll += std::log(denom / (static_cast<double>(is.size()) + 1.0));
          const double c0 = o.t[0][f] / denom;
          count[0][f] += c0;
          total[0] += c0;
          for (int e : is) {
            const double c = o.t[e][f] / denom;
            count[e][f] += c;
            total[e] += c;
          }
        }
      }
      for (int e = reestimate_null ? 0 : 1; e < E; ++e) {
        if (total[e] <= 0.0) continue;
        for (int f = 0; f < F; ++f) o.t[e][f] = count[e][f] / total[e];
      }
      o.log_likelihood.push_back(ll);
    }
    return o;
  }

  double prob(const std::string& e, const std::string& f) const {
    int ei = -1, fi = -1;
    for (std::size_t i = 0; i < src_vocab.size(); ++i) {
      if (src_vocab[i] == e) ei = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < tgt_vocab.size(); ++i) {
      if (tgt_vocab[i] == f) fi = static_cast<int>(i);
    }
    return (ei >= 0 && fi >= 0) ? t[ei][fi] : 0.0;
  }
};

// Keep/drop decisions of the lower-tail z-score rule, recomputed from
// scratch given the three feature columns.
inline std::vector<bool> zscore_keep_oracle(
    const std::vector<std::array<double, 3>>& features, double multiplier) {
  const double n = static_cast<double>(features.size());
  std::array<double, 3> cutoff{};
  for (int f = 0; f < 3; ++f) {
    double mean = 0.0;
    for (const auto& row : features) mean += row[f];
    mean /= n;
    double ss = 0.0;
    for (const auto& row : features) ss += (row[f] - mean) * (row[f] - mean);
    cutoff[f] = mean - multiplier * std::sqrt(ss / n);
  }
  std::vector<bool> keep;
  keep.reserve(features.size());
  for (const auto& row : features) {
    keep.push_back(row[0] >= cutoff[0] && row[1] >= cutoff[1] &&
                   row[2] >= cutoff[2]);
  }
  return keep;
}

}  // namespace testutil
