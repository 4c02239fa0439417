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

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/error.hpp"
#include "forge/token.hpp"

namespace forge {

// Corpus-level case-sensitive BLEU with a single reference per hypothesis.
// No smoothing: any zero modified precision zeroes the score.
struct BleuBreakdown {
  std::vector<double> precisions;  // p_1 .. p_max_n
  double brevity_penalty = 1.0;
  long hyp_length = 0;
  long ref_length = 0;
  double score = 0.0;

  double ratio() const {
    return ref_length == 0 ? 0.0
                           : static_cast<double>(hyp_length) /
                                 static_cast<double>(ref_length);
  }
};

namespace detail {

inline std::unordered_map<std::string, long> ngram_counts(
    const std::vector<std::string>& tokens, std::size_t n) {
  std::unordered_map<std::string, long> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t j = 0; j < n; ++j) {
      if (j) key.push_back('\x1f');
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace detail

inline BleuBreakdown bleu_corpus(const std::vector<TokenSeq>& hyps,
                                 const std::vector<TokenSeq>& refs,
                                 std::size_t max_n = 4) {
  if (max_n < 1) throw UsageError("bleu: max_n must be >= 1");
  if (hyps.size() != refs.size()) {
    throw DataError("bleu: hypothesis/reference counts differ: " +
                    std::to_string(hyps.size()) + " vs " +
                    std::to_string(refs.size()));
  }
  if (hyps.empty()) throw DataError("bleu: empty corpus");

  BleuBreakdown bd;
  std::vector<long> matches(max_n, 0);
  std::vector<long> totals(max_n, 0);
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    bd.hyp_length += static_cast<long>(hyps[s].size());
    bd.ref_length += static_cast<long>(refs[s].size());
    for (std::size_t n = 1; n <= max_n; ++n) {
      const auto hyp_counts = detail::ngram_counts(hyps[s].tokens, n);
      const auto ref_counts = detail::ngram_counts(refs[s].tokens, n);
      for (const auto& [gram, count] : hyp_counts) {
        totals[n - 1] += count;
        const auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) {
          matches[n - 1] += std::min(count, it->second);  // clipping
        }
      }
    }
  }
  bd.precisions.resize(max_n);
  bool any_zero = false;
  for (std::size_t n = 0; n < max_n; ++n) {
    bd.precisions[n] = totals[n] > 0 ? static_cast<double>(matches[n]) /
                                           static_cast<double>(totals[n])
                                     : 0.0;
    any_zero = any_zero || bd.precisions[n] <= 0.0;
  }
  bd.brevity_penalty =
      (bd.hyp_length >= bd.ref_length || bd.hyp_length == 0)
          ? (bd.hyp_length == 0 ? 0.0 : 1.0)
          : std::exp(1.0 - static_cast<double>(bd.ref_length) /
                               static_cast<double>(bd.hyp_length));
  if (any_zero) {
    bd.score = 0.0;
  } else {
    double log_sum = 0.0;
    for (double p : bd.precisions) log_sum += std::log(p);
    bd.score = bd.brevity_penalty * std::exp(log_sum / static_cast<double>(max_n));
  }
  return bd;
}

}  // namespace forge
