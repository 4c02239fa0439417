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
#include <string>
#include <string_view>
#include <vector>

#include "forge/emoji_ranges.hpp"
#include "forge/utf8.hpp"

namespace forge {

inline bool is_space_cp(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0xA0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

inline bool is_ascii_punct(char32_t cp) {
  return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
         (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

// Simple deterministic lowercase: ASCII, Latin-1, Latin Extended-A, Greek,
// Cyrillic and fullwidth Latin.  Everything else maps to itself.
inline char32_t lower_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp == 0x130) return 0x69;   // dotted capital I
  if (cp == 0x178) return 0xFF;   // Y with diaeresis
  if (cp == 0x17F) return 0x73;   // long s
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp == 0x386) return 0x3AC;
  if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
  if (cp == 0x38C) return 0x3CC;
  if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0xFF21 && cp <= 0xFF3A) return cp + 0x20;
  return cp;
}

inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) utf8::append(out, lower_cp(utf8::next(s, pos)));
  return out;
}

inline bool is_pictographic(char32_t cp) {
  const auto it = std::upper_bound(
      kPictographicRanges.begin(), kPictographicRanges.end(), cp,
      [](char32_t v, const CpRange& r) { return v < r.lo; });
  return it != kPictographicRanges.begin() && cp <= (it - 1)->hi;
}

inline bool is_regional_indicator(char32_t cp) {
  return cp >= 0x1F1E6 && cp <= 0x1F1FF;
}

inline bool is_skin_tone(char32_t cp) { return cp >= 0x1F3FB && cp <= 0x1F3FF; }

// Code points that may accompany an emoji without being one on their own.
inline bool is_emoji_component(char32_t cp) {
  return cp == 0xFE0E || cp == 0xFE0F ||       // presentation selectors
         cp == 0x200D ||                       // zero-width joiner
         cp == 0x20E3 ||                       // combining keycap
         is_skin_tone(cp) ||
         (cp >= 0xE0020 && cp <= 0xE007F);     // tag characters
}

inline bool is_keycap_base(char32_t cp) {
  return cp == U'#' || cp == U'*' || (cp >= U'0' && cp <= U'9');
}

// A token is an emoji iff every code point is pictographic, a regional
// indicator, a component, or a keycap base, and it contains at least one
// pictographic / regional-indicator code point or a combining keycap.
inline bool is_emoji_token(const std::vector<char32_t>& cps) {
  if (cps.empty()) return false;
  bool anchored = false;
  for (char32_t cp : cps) {
    if (is_pictographic(cp) || is_regional_indicator(cp) || cp == 0x20E3) {
      anchored = true;
    } else if (!is_emoji_component(cp) && !is_keycap_base(cp)) {
      return false;
    }
  }
  return anchored;
}

// Length in code points of the emoji grapheme starting at cps[i], or 0 if
// none starts there.  Handles variation selectors, skin tones, ZWJ
// sequences, regional-indicator pairs and keycap sequences.
inline std::size_t emoji_grapheme_len(const std::vector<char32_t>& cps,
                                      std::size_t i) {
  const std::size_t n = cps.size();
  if (i >= n) return 0;
  std::size_t j = i;
  if (is_regional_indicator(cps[j])) {
    ++j;
    if (j < n && is_regional_indicator(cps[j])) ++j;  // flag pair
    return j - i;
  }
  if (is_keycap_base(cps[j])) {
    std::size_t k = j + 1;
    if (k < n && cps[k] == 0xFE0F) ++k;
    if (k < n && cps[k] == 0x20E3) return k + 1 - i;
    return 0;
  }
  if (!is_pictographic(cps[j])) return 0;
  ++j;
  while (j < n) {
    if (is_emoji_component(cps[j]) && cps[j] != 0x200D) {
      ++j;
    } else if (cps[j] == 0x200D && j + 1 < n && is_pictographic(cps[j + 1])) {
      j += 2;
    } else {
      break;
    }
  }
  return j - i;
}

}  // namespace forge
