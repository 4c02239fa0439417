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

#include "forge/emoticon.hpp"
#include "forge/token.hpp"
#include "forge/unicode.hpp"
#include "forge/utf8.hpp"

namespace forge {

namespace detail {

// Emits tokens for one whitespace-delimited chunk: emoticon chunks stay
// whole, emoji graphemes become their own tokens, and remaining spans have
// leading/trailing ASCII punctuation runs detached as single tokens.
inline void tokenize_chunk(const std::vector<char32_t>& cps,
                           std::vector<std::string>& out) {
  if (is_emoticon_cps(cps)) {
    out.push_back(utf8::encode(cps));
    return;
  }
  auto emit_span = [&out](const std::vector<char32_t>& cps, std::size_t lo,
                          std::size_t hi) {
    if (lo >= hi) return;
    std::size_t head = lo;
    while (head < hi && is_ascii_punct(cps[head])) ++head;
    if (head == hi) {  // all punctuation: keep the run as one token
      out.push_back(utf8::encode({cps.begin() + lo, cps.begin() + hi}));
      return;
    }
    std::size_t tail = hi;
    while (tail > head && is_ascii_punct(cps[tail - 1])) --tail;
    if (head > lo)
      out.push_back(utf8::encode({cps.begin() + lo, cps.begin() + head}));
    out.push_back(utf8::encode({cps.begin() + head, cps.begin() + tail}));
    if (tail < hi)
      out.push_back(utf8::encode({cps.begin() + tail, cps.begin() + hi}));
  };
  std::size_t span_start = 0;
  std::size_t i = 0;
  while (i < cps.size()) {
    const std::size_t len = emoji_grapheme_len(cps, i);
    if (len > 0) {
      emit_span(cps, span_start, i);
      out.push_back(utf8::encode({cps.begin() + i, cps.begin() + i + len}));
      i += len;
      span_start = i;
    } else {
      ++i;
    }
  }
  emit_span(cps, span_start, cps.size());
}

}  // namespace detail

// Whitespace tokenization with punctuation detachment.  Emoji and emoticon
// character runs are never split internally.  Throws DataError on invalid
// UTF-8, naming the byte offset.
inline TokenSeq tokenize_basic(std::string_view line,
                               std::string_view lang = {}) {
  TokenSeq seq;
  seq.lang = lang;
  std::vector<char32_t> chunk;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const char32_t cp = utf8::next(line, pos);
    if (is_space_cp(cp)) {
      if (!chunk.empty()) {
        detail::tokenize_chunk(chunk, seq.tokens);
        chunk.clear();
      }
    } else {
      chunk.push_back(cp);
    }
  }
  if (!chunk.empty()) detail::tokenize_chunk(chunk, seq.tokens);
  return seq;
}

namespace detail {

inline bool is_fullwidth_terminal(char32_t cp) {
  return cp == 0x3002 || cp == 0xFF01 || cp == 0xFF1F;  // 。 ！ ？
}

inline bool is_ascii_terminal(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?';
}

// A character that may open a new sentence after ". ": uppercase ASCII,
// an opening quote or bracket, or anything from the CJK blocks.
inline bool is_sentence_opener(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return true;
  switch (cp) {
    case U'"': case U'\'': case U'(': case U'[':
    case 0xAB:                                  // «
    case 0x300C: case 0x300E: case 0xFF08:      // 「 『 （
      return true;
    default:
      return cp >= 0x2E80;
  }
}

}  // namespace detail

// Rule-based sentence splitting.  A maximal run of terminal punctuation
// ends a sentence when (a) it contains a fullwidth terminal (。！？), or
// (b) it is ASCII (.!?) and is followed by whitespace whose next
// non-whitespace character opens a sentence.  All non-whitespace characters
// are preserved in order; sentences are trimmed and empty ones dropped.
inline std::vector<std::string> split_sentences(std::string_view text) {
  const std::vector<char32_t> cps = utf8::decode(text);
  std::vector<std::string> out;
  std::vector<char32_t> current;
  auto flush = [&] {
    std::size_t lo = 0;
    std::size_t hi = current.size();
    while (lo < hi && is_space_cp(current[lo])) ++lo;
    while (hi > lo && is_space_cp(current[hi - 1])) --hi;
    if (hi > lo)
      out.push_back(utf8::encode({current.begin() + lo, current.begin() + hi}));
    current.clear();
  };
  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    if (!detail::is_ascii_terminal(cps[i]) &&
        !detail::is_fullwidth_terminal(cps[i])) {
      current.push_back(cps[i]);
      ++i;
      continue;
    }
    bool fullwidth = false;
    while (i < n && (detail::is_ascii_terminal(cps[i]) ||
                     detail::is_fullwidth_terminal(cps[i]))) {
      fullwidth = fullwidth || detail::is_fullwidth_terminal(cps[i]);
      current.push_back(cps[i]);
      ++i;
    }
    if (fullwidth) {
      flush();
      continue;
    }
    if (i < n && is_space_cp(cps[i])) {
      std::size_t next = i;
      while (next < n && is_space_cp(cps[next])) ++next;
      if (next == n || detail::is_sentence_opener(cps[next])) flush();
    }
  }
  flush();
  return out;
}

// Discard iff the sentence has more than max_len tokens or exactly one
// token.  Zero-token sentences are discarded as degenerate.
inline bool keep_by_length(const TokenSeq& s, std::size_t max_len = 80) {
  return s.size() >= 2 && s.size() <= max_len;
}

}  // namespace forge
