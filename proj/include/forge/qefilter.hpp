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
#include <string>
#include <vector>

#include "forge/error.hpp"
#include "forge/ibm1.hpp"
#include "forge/ngram.hpp"
#include "forge/token.hpp"

namespace forge {

// A sentence pair with its three per-token log-score features.  The kept
// flag and per-feature passes are filled in by zscore_filter.
struct ScoredPair {
  TokenSeq src;
  TokenSeq tgt;
  double s_lm = 0.0;     // per-token source LM log prob
  double t_lm = 0.0;     // per-token target LM log prob
  double a_score = 0.0;  // per-token alignment log prob, target given source
  bool kept = false;
  bool pass_s_lm = false;
  bool pass_t_lm = false;
  bool pass_a = false;
};

struct FilterReport {
  std::size_t total = 0;
  std::size_t kept = 0;
  std::size_t rejected_s_lm = 0;  // a pair may count in several features
  std::size_t rejected_t_lm = 0;
  std::size_t rejected_a = 0;
  double mean[3] = {0, 0, 0};    // s_lm, t_lm, a_score
  double sigma[3] = {0, 0, 0};   // population
  double multiplier = 0.0;
};

// Scores every pair; no filtering happens here.  Pairs with an empty side
// are data errors (the caller reports the line).
inline std::vector<ScoredPair> score_pairs(
    const NgramModel& src_lm, const NgramModel& tgt_lm, const AlignModel& am,
    const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs) {
  std::vector<ScoredPair> scored;
  scored.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [src, tgt] = pairs[i];
    if (src.empty() || tgt.empty()) {
      throw DataError("qefilter: empty side in pair", i + 1);
    }
    ScoredPair sp;
    sp.src = src;
    sp.tgt = tgt;
    sp.s_lm = src_lm.score(src).per_token;
    sp.t_lm = tgt_lm.score(tgt).per_token;
    sp.a_score = am.score(src, tgt);
    scored.push_back(std::move(sp));
  }
  return scored;
}

// Lower-tail z-score filter: a pair is kept iff every feature value is at
// least mean - multiplier * sigma for that feature (population sigma over
// the scored corpus).  Only the low tail is noise; high scores are good.
// Annotates the input pairs in place so callers can write the full report.
inline std::pair<std::vector<ScoredPair>, FilterReport> zscore_filter(
    std::vector<ScoredPair>& scored, double multiplier = 2.0) {
  if (scored.empty()) throw DataError("qefilter: nothing to filter");
  if (multiplier <= 0) throw UsageError("qefilter: multiplier must be positive");
  FilterReport report;
  report.total = scored.size();
  report.multiplier = multiplier;
  const double n = static_cast<double>(scored.size());
  auto feature = [](const ScoredPair& sp, int f) {
    return f == 0 ? sp.s_lm : f == 1 ? sp.t_lm : sp.a_score;
  };
  double cutoff[3];
  for (int f = 0; f < 3; ++f) {
    double mean = 0.0;
    for (const auto& sp : scored) mean += feature(sp, f);
    mean /= n;
    double ss = 0.0;
    for (const auto& sp : scored) {
      const double d = feature(sp, f) - mean;
      ss += d * d;
    }
    report.mean[f] = mean;
    report.sigma[f] = std::sqrt(ss / n);
    cutoff[f] = mean - multiplier * report.sigma[f];
  }
  std::vector<ScoredPair> kept;
  for (auto& sp : scored) {
    sp.pass_s_lm = sp.s_lm >= cutoff[0];
    sp.pass_t_lm = sp.t_lm >= cutoff[1];
    sp.pass_a = sp.a_score >= cutoff[2];
    sp.kept = sp.pass_s_lm && sp.pass_t_lm && sp.pass_a;
    if (!sp.pass_s_lm) ++report.rejected_s_lm;
    if (!sp.pass_t_lm) ++report.rejected_t_lm;
    if (!sp.pass_a) ++report.rejected_a;
    if (sp.kept) {
      ++report.kept;
      kept.push_back(sp);
    }
  }
  return {std::move(kept), report};
}

// Per-pair report rows: line_no<TAB>s_lm<TAB>t_lm<TAB>a_score<TAB>kept.
inline void write_filter_report(std::ostream& out,
                                const std::vector<ScoredPair>& all_scored) {
  out << "line_no\ts_lm\tt_lm\ta_score\tkept\n";
  char buf[128];
  for (std::size_t i = 0; i < all_scored.size(); ++i) {
    const auto& sp = all_scored[i];
    std::snprintf(buf, sizeof(buf), "%zu\t%.6f\t%.6f\t%.6f\t%d", i + 1,
                  sp.s_lm, sp.t_lm, sp.a_score, sp.kept ? 1 : 0);
    out << buf << '\n';
  }
}

}  // namespace forge
