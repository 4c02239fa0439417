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
#include <string>
#include <vector>

#include "forge/error.hpp"
#include "forge/lineio.hpp"
#include "forge/token.hpp"
#include "forge/unicode.hpp"

namespace forge {

// Statistical casing model: for each lowercased token, the most frequent
// surface form seen away from sentence starts.  Immutable once trained.
class CaseModel {
 public:
  // Per lowercased key, best_form is the most frequent surface form among
  // non-sentence-initial occurrences; tokens seen only sentence-initially
  // fall back to their most frequent overall form.  Ties break to the
  // lexicographically smallest surface form.
  static CaseModel train(const std::vector<TokenSeq>& corpus) {
    if (corpus.empty()) throw DataError("truecase training corpus is empty");
    // key -> surface form -> (non-initial count, total count)
    std::map<std::string, std::map<std::string, std::pair<long, long>>> stats;
    for (const auto& sent : corpus) {
      for (std::size_t i = 0; i < sent.tokens.size(); ++i) {
        auto& entry = stats[to_lower(sent.tokens[i])][sent.tokens[i]];
        if (i > 0) ++entry.first;
        ++entry.second;
      }
    }
    CaseModel model;
    for (const auto& [key, forms] : stats) {
      bool any_non_initial = false;
      for (const auto& [form, counts] : forms) {
        (void)form;
        if (counts.first > 0) any_non_initial = true;
      }
      const std::string* best = nullptr;
      long best_count = -1;
      for (const auto& [form, counts] : forms) {
        const long c = any_non_initial ? counts.first : counts.second;
        if (c > best_count || (c == best_count && form < *best)) {
          best = &form;
          best_count = c;
        }
      }
      model.best_form_[key] = {*best, best_count};
    }
    return model;
  }

  // Replaces only the sentence-initial token by the best form of its
  // lowercase; an unknown initial token is lowercased.  Idempotent.
  TokenSeq apply(const TokenSeq& s) const {
    if (s.tokens.empty()) return s;
    TokenSeq out = s;
    const std::string key = to_lower(out.tokens[0]);
    const auto it = best_form_.find(key);
    out.tokens[0] = (it != best_form_.end()) ? it->second.first : key;
    return out;
  }

  const std::string* lookup(const std::string& lowercased) const {
    const auto it = best_form_.find(lowercased);
    return it != best_form_.end() ? &it->second.first : nullptr;
  }

  std::size_t size() const { return best_form_.size(); }

  // TSV rows: lowercased<TAB>best_form<TAB>count.
  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    for (const auto& [key, value] : best_form_) {
      out << key << '\t' << value.first << '\t' << value.second << '\n';
    }
  }

  static CaseModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open case model: " + path);
    CaseModel model;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      chomp_cr(line);
      if (line.empty()) continue;
      const auto t1 = line.find('\t');
      const auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
      if (t1 == std::string::npos || t2 == std::string::npos) {
        throw DataError("malformed case model row in " + path, line_no);
      }
      const std::string key = line.substr(0, t1);
      const std::string form = line.substr(t1 + 1, t2 - t1 - 1);
      long count = 0;
      try {
        count = std::stol(line.substr(t2 + 1));
      } catch (const std::exception&) {
        throw DataError("bad count in " + path, line_no);
      }
      if (count <= 0) throw DataError("non-positive count in " + path, line_no);
      model.best_form_[key] = {form, count};
    }
    return model;
  }

 private:
  std::map<std::string, std::pair<std::string, long>> best_form_;
};

}  // namespace forge
