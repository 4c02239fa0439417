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

#include <string>
#include <string_view>
#include <vector>

namespace forge {

// One sentence as an ordered sequence of tokens.  Tokens are non-empty and
// contain no whitespace; joining with single spaces and re-tokenizing is
// idempotent.
struct TokenSeq {
  std::vector<std::string> tokens;
  std::string lang;  // informational only

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }

  std::string join() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out.push_back(' ');
      out += tokens[i];
    }
    return out;
  }

  bool operator==(const TokenSeq& other) const {
    return tokens == other.tokens;
  }
};

// Splits an already-tokenized line on single spaces.  No normalization; use
// tokenize_basic for raw text.
inline TokenSeq from_pretokenized(std::string_view line) {
  TokenSeq seq;
  std::size_t start = 0;
  while (start < line.size()) {
    std::size_t end = line.find(' ', start);
    if (end == std::string_view::npos) end = line.size();
    if (end > start) seq.tokens.emplace_back(line.substr(start, end - start));
    start = end + 1;
  }
  return seq;
}

}  // namespace forge
