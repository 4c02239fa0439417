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
#include <string>
#include <string_view>
#include <vector>

#include "forge/emoticon.hpp"
#include "forge/error.hpp"
#include "forge/lineio.hpp"
#include "forge/token.hpp"
#include "forge/unicode.hpp"

namespace forge {

inline constexpr std::string_view kPlaceholderToken = "<PH>";
inline constexpr std::string_view kPlaceholderEscaped = "&lt;PH&gt;";

enum class SpecialClass { kEmoji, kEmoticon, kQuote };

inline const char* to_string(SpecialClass c) {
  switch (c) {
    case SpecialClass::kEmoji: return "EMOJI";
    case SpecialClass::kEmoticon: return "EMOTICON";
    case SpecialClass::kQuote: return "QUOTE";
  }
  return "?";
}

// A token (or space-joined token run) lifted out of a sentence: an emoji,
// an emoticon, or a leading ">" quotation mark.
struct Special {
  std::string surface;  // original text; spaces separate run tokens
  SpecialClass cls;
  std::size_t position;  // index of the first covered token in the source

  bool operator==(const Special& o) const {
    return surface == o.surface && cls == o.cls && position == o.position;
  }
};

// Template sentence with <PH> slots plus the extracted specials in
// left-to-right order.  The number of <PH> tokens equals specials.size().
struct PlaceholderRecord {
  TokenSeq tmpl;
  std::vector<Special> specials;
};

struct RestoreStats {
  std::size_t deleted_extra = 0;     // <PH> in output beyond the specials
  std::size_t appended_missing = 0;  // specials with no surviving <PH>
  bool repaired() const { return deleted_extra + appended_missing > 0; }
};

namespace detail {

inline std::vector<char32_t> concat_cps(const std::vector<std::string>& tokens,
                                        std::size_t lo, std::size_t hi) {
  std::vector<char32_t> cps;
  for (std::size_t i = lo; i < hi; ++i) {
    const auto t = utf8::decode(tokens[i]);
    cps.insert(cps.end(), t.begin(), t.end());
  }
  return cps;
}

inline std::string join_range(const std::vector<std::string>& tokens,
                              std::size_t lo, std::size_t hi) {
  std::string out;
  for (std::size_t i = lo; i < hi; ++i) {
    if (i > lo) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace detail

// Finds emojis, emoticon token runs and a leading ">" quote.  Overlaps
// resolve longest-first: at each position the longest emoticon run wins
// before single-token emoji or quote checks.
inline std::vector<Special> detect_specials(const TokenSeq& s) {
  std::vector<Special> specials;
  const auto& tokens = s.tokens;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t run_end = 0;
    const std::size_t max_run =
        std::min(tokens.size(), i + kEmoticonMaxRunTokens);
    for (std::size_t j = max_run; j > i; --j) {
      if (is_emoticon_cps(detail::concat_cps(tokens, i, j))) {
        run_end = j;
        break;
      }
    }
    if (run_end > 0) {
      specials.push_back(
          {detail::join_range(tokens, i, run_end), SpecialClass::kEmoticon, i});
      i = run_end;
      continue;
    }
    if (is_emoji_token(utf8::decode(tokens[i]))) {
      specials.push_back({tokens[i], SpecialClass::kEmoji, i});
    } else if (i == 0 && tokens[0] == ">") {
      specials.push_back({">", SpecialClass::kQuote, 0});
    }
    ++i;
  }
  return specials;
}

// Replaces each detected special with a single <PH> token.  A literal
// <PH> in the raw input is escaped so it cannot collide with real slots;
// restore() undoes the escape.
inline PlaceholderRecord placeholderize(const TokenSeq& s) {
  PlaceholderRecord rec;
  rec.tmpl.lang = s.lang;
  rec.specials = detect_specials(s);
  std::size_t next = 0;
  std::size_t i = 0;
  while (i < s.tokens.size()) {
    if (next < rec.specials.size() && rec.specials[next].position == i) {
      rec.tmpl.tokens.emplace_back(kPlaceholderToken);
      // skip all tokens covered by this special's surface
      std::size_t covered = 1;
      const std::string& surf = rec.specials[next].surface;
      for (char c : surf) covered += (c == ' ') ? 1 : 0;
      i += covered;
      ++next;
    } else {
      if (s.tokens[i] == kPlaceholderToken) {
        rec.tmpl.tokens.emplace_back(kPlaceholderEscaped);
      } else {
        rec.tmpl.tokens.push_back(s.tokens[i]);
      }
      ++i;
    }
  }
  return rec;
}

// Fills <PH> slots with the specials in order.  Extra slots are deleted;
// leftover specials are appended at the end (QUOTE specials are prepended
// instead).  Escaped literal <PH> tokens are unescaped.
inline std::pair<TokenSeq, RestoreStats> restore(
    const TokenSeq& translated, const std::vector<Special>& specials) {
  TokenSeq out;
  out.lang = translated.lang;
  RestoreStats stats;
  std::size_t next = 0;
  auto splice_surface = [&out](const std::string& surface) {
    std::size_t start = 0;
    while (start <= surface.size()) {
      std::size_t end = surface.find(' ', start);
      if (end == std::string::npos) end = surface.size();
      if (end > start) out.tokens.push_back(surface.substr(start, end - start));
      start = end + 1;
    }
  };
  for (const auto& tok : translated.tokens) {
    if (tok == kPlaceholderToken) {
      if (next < specials.size()) {
        splice_surface(specials[next].surface);
        ++next;
      } else {
        ++stats.deleted_extra;
      }
    } else if (tok == kPlaceholderEscaped) {
      out.tokens.emplace_back(kPlaceholderToken);
    } else {
      out.tokens.push_back(tok);
    }
  }
  for (; next < specials.size(); ++next) {
    ++stats.appended_missing;
    if (specials[next].cls == SpecialClass::kQuote) {
      out.tokens.insert(out.tokens.begin(), specials[next].surface);
    } else {
      splice_surface(specials[next].surface);
    }
  }
  return {std::move(out), stats};
}

// --- Sidecar file: one TSV record per line, bit-exact -------------------
//
//   line_no<TAB>class:surface<TAB>class:surface...
//
// line_no is 1-based; a line with no specials is just the number.  Surfaces
// may contain spaces (multi-token emoticons) but never tabs.

inline void write_sidecar(std::ostream& out,
                          const std::vector<std::vector<Special>>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    out << (i + 1);
    for (const auto& sp : records[i]) {
      out << '\t' << to_string(sp.cls) << ':' << sp.surface;
    }
    out << '\n';
  }
}

inline void write_sidecar(const std::string& path,
                          const std::vector<std::vector<Special>>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open sidecar for writing: " + path);
  write_sidecar(out, records);
}

// Positions are not stored in the sidecar; restore only needs order.
// Loaded specials carry position 0, except quotes which keep semantics.
inline std::vector<std::vector<Special>> read_sidecar(std::istream& in) {
  std::vector<std::vector<Special>> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp_cr(line);
    std::vector<Special> specials;
    std::size_t start = line.find('\t');
    const std::string num = line.substr(0, start);
    if (num != std::to_string(line_no)) {
      throw DataError("sidecar line number mismatch: expected " +
                          std::to_string(line_no) + ", found '" + num + "'",
                      line_no);
    }
    while (start != std::string::npos) {
      ++start;
      std::size_t end = line.find('\t', start);
      const std::string field =
          line.substr(start, end == std::string::npos ? end : end - start);
      const std::size_t colon = field.find(':');
      if (colon == std::string::npos) {
        throw DataError("malformed sidecar field '" + field + "'", line_no);
      }
      const std::string cls = field.substr(0, colon);
      const std::string surface = field.substr(colon + 1);
      if (surface.empty()) throw DataError("empty sidecar surface", line_no);
      SpecialClass sc;
      if (cls == "EMOJI") {
        sc = SpecialClass::kEmoji;
      } else if (cls == "EMOTICON") {
        sc = SpecialClass::kEmoticon;
      } else if (cls == "QUOTE") {
        sc = SpecialClass::kQuote;
      } else {
        throw DataError("unknown sidecar class '" + cls + "'", line_no);
      }
      specials.push_back({surface, sc, 0});
      start = end;
    }
    records.push_back(std::move(specials));
  }
  return records;
}

inline std::vector<std::vector<Special>> read_sidecar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open sidecar: " + path);
  return read_sidecar(in);
}

}  // namespace forge
