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
#include <unordered_set>
#include <vector>

#include "forge/unicode.hpp"
#include "forge/utf8.hpp"

namespace forge {

// Deterministic emoticon grammar.  A character sequence is an emoticon iff
//   1. it is at least kEmoticonMinLength code points long,
//   2. every code point is drawn from the emoticon alphabet
//      (structural | face symbol | face letter | connector),
//   3. it contains at least one face symbol, and
//   4. its paired brackets are balanced within kEmoticonNearBalance.
// The same sets are published in data/emoticon_grammar.tsv; a unit test
// keeps the two in sync.

inline constexpr const char* kEmoticonGrammarVersion = "v1";
inline constexpr std::size_t kEmoticonMinLength = 3;
inline constexpr std::size_t kEmoticonMaxRunTokens = 8;
inline constexpr int kEmoticonNearBalance = 1;

inline constexpr std::string_view kEmoticonStructural =
    "()[]{}<>/\\|（）［］｛｝＜＞「」『』〈〉";
inline constexpr std::string_view kEmoticonSymbolFace =
    ":;=^~*@_´`＾°¯｀ωДд∀・･εз∇｡";
inline constexpr std::string_view kEmoticonLetterFace = "oO0TxXvVmnuUwWーツノヽヾ";
inline constexpr std::string_view kEmoticonConnect = "-.,'\"";
inline constexpr std::string_view kEmoticonOpenBrackets = "([{（［｛「『〈";
inline constexpr std::string_view kEmoticonCloseBrackets = ")]}）］｝」』〉";

namespace detail {

struct EmoticonSets {
  std::unordered_set<char32_t> alphabet;
  std::unordered_set<char32_t> symbol_face;
  std::unordered_set<char32_t> open_brackets;
  std::unordered_set<char32_t> close_brackets;
};

inline const EmoticonSets& emoticon_sets() {
  static const EmoticonSets sets = [] {
    EmoticonSets s;
    auto add = [](std::unordered_set<char32_t>& dst, std::string_view src) {
      for (char32_t cp : utf8::decode(src)) dst.insert(cp);
    };
    add(s.alphabet, kEmoticonStructural);
    add(s.alphabet, kEmoticonSymbolFace);
    add(s.alphabet, kEmoticonLetterFace);
    add(s.alphabet, kEmoticonConnect);
    add(s.symbol_face, kEmoticonSymbolFace);
    add(s.open_brackets, kEmoticonOpenBrackets);
    add(s.close_brackets, kEmoticonCloseBrackets);
    return s;
  }();
  return sets;
}

}  // namespace detail

inline bool is_emoticon_cps(const std::vector<char32_t>& cps) {
  if (cps.size() < kEmoticonMinLength) return false;
  const auto& sets = detail::emoticon_sets();
  bool has_face = false;
  int balance_open = 0;
  int balance_close = 0;
  for (char32_t cp : cps) {
    if (!sets.alphabet.count(cp)) return false;
    if (sets.symbol_face.count(cp)) has_face = true;
    if (sets.open_brackets.count(cp)) ++balance_open;
    if (sets.close_brackets.count(cp)) ++balance_close;
  }
  if (!has_face) return false;
  const int diff = balance_open - balance_close;
  return diff <= kEmoticonNearBalance && -diff <= kEmoticonNearBalance;
}

inline bool is_emoticon(std::string_view token) {
  return is_emoticon_cps(utf8::decode(token));
}

}  // namespace forge
