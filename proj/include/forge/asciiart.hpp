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
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/error.hpp"
#include "forge/token.hpp"

namespace forge {

// Per-type token frequencies of one sentence, in first-occurrence order.
// Sum of entries equals the token count; every entry is at least 1.
struct FreqVector {
  std::vector<long> counts;
};

struct AAReport {
  std::size_t kept = 0;
  std::size_t discarded = 0;
  std::vector<double> sigmas;  // per input sentence, in order
  double threshold = 0.0;
};

inline FreqVector word_freq_vector(const TokenSeq& s) {
  if (s.empty()) throw DataError("word_freq_vector: empty sentence");
  FreqVector fv;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& tok : s.tokens) {
    const auto [it, inserted] = index.emplace(tok, fv.counts.size());
    if (inserted) {
      fv.counts.push_back(1);
    } else {
      ++fv.counts[it->second];
    }
  }
  return fv;
}

inline double stddev(const std::vector<long>& xs, bool sample = false) {
  const std::size_t n = xs.size();
  if (n <= 1) return 0.0;
  double mean = 0.0;
  for (long x : xs) mean += static_cast<double>(x);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (long x : xs) {
    const double d = static_cast<double>(x) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(sample ? n - 1 : n));
}

// ASCII-art score: standard deviation of the sentence's word-frequency
// vector.  Population formula by default so constant vectors score exactly
// zero; a single repeated token also scores zero (known limitation).
inline double aa_score(const TokenSeq& s, bool sample = false) {
  return stddev(word_freq_vector(s).counts, sample);
}

// Discards sentences whose score strictly exceeds the threshold; a
// boundary score equal to the threshold is kept.
inline std::pair<std::vector<TokenSeq>, AAReport> filter_ascii_art(
    const std::vector<TokenSeq>& corpus, double threshold = 6.0,
    bool sample = false) {
  if (threshold <= 0) throw UsageError("asciiart threshold must be positive");
  std::vector<TokenSeq> kept;
  AAReport report;
  report.threshold = threshold;
  report.sigmas.reserve(corpus.size());
  for (const auto& sent : corpus) {
    const double sigma = sent.empty() ? 0.0 : aa_score(sent, sample);
    report.sigmas.push_back(sigma);
    if (sigma > threshold) {
      ++report.discarded;
    } else {
      kept.push_back(sent);
      ++report.kept;
    }
  }
  return {std::move(kept), report};
}

}  // namespace forge
