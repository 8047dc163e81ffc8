/*
 * Copyright 2026 The Procurisk Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Deterministic name homogenization for buyer and supplier identifiers.
//
// Rules, applied per code point:
//   * ASCII letters are uppercased; digits are kept.
//   * Latin-1 and Latin Extended-A letters fold to their uppercase base
//     letters (Ó -> O, Ñ -> N, Æ -> AE, ß -> SS).
//   * Combining diacritical marks, ASCII punctuation, Latin-1 symbols and
//     general punctuation are removed.
//   * Any whitespace (including NBSP and the Unicode space block) becomes a
//     separator; runs collapse to one space and the ends are trimmed.
//   * Other code points pass through unchanged.
// Bytes that do not form valid UTF-8 are read as Latin-1, so legacy
// registry exports normalize the same as their UTF-8 equivalents.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace procurisk {

namespace detail {

// Decodes one code point starting at s[i]; advances i. Invalid sequences
// yield the lead byte as a Latin-1 code point.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  auto cont = [&](std::size_t k) {
    return i + k < s.size() &&
           (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  auto byte = [&](std::size_t k) {
    return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F);
  };
  if (b0 >= 0xC2 && b0 <= 0xDF && cont(1)) {
    char32_t cp = (static_cast<char32_t>(b0 & 0x1F) << 6) | byte(1);
    i += 2;
    return cp;
  }
  if (b0 >= 0xE0 && b0 <= 0xEF && cont(1) && cont(2)) {
    char32_t cp = (static_cast<char32_t>(b0 & 0x0F) << 12) | (byte(1) << 6) |
                  byte(2);
    if (cp >= 0x800 && (cp < 0xD800 || cp > 0xDFFF)) {
      i += 3;
      return cp;
    }
  }
  if (b0 >= 0xF0 && b0 <= 0xF4 && cont(1) && cont(2) && cont(3)) {
    char32_t cp = (static_cast<char32_t>(b0 & 0x07) << 18) | (byte(1) << 12) |
                  (byte(2) << 6) | byte(3);
    if (cp >= 0x10000 && cp <= 0x10FFFF) {
      i += 4;
      return cp;
    }
  }
  ++i;
  return b0;
}

inline void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline bool is_space(char32_t cp) {
  return cp == ' ' || (cp >= 0x09 && cp <= 0x0D) || cp == 0xA0 ||
         (cp >= 0x2000 && cp <= 0x200A) || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

inline bool is_dropped(char32_t cp) {
  if (cp < 0x80) {
    const bool alnum = (cp >= '0' && cp <= '9') || (cp >= 'A' && cp <= 'Z') ||
                       (cp >= 'a' && cp <= 'z');
    return !alnum;
  }
  return (cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
         (cp >= 0x0300 && cp <= 0x036F) || (cp >= 0x200B && cp <= 0x206F) ||
         cp == 0xFEFF;
}

// Base-letter folding for U+00C0..U+017F. Returns nullptr when the code
// point is outside that block.
inline const char* fold_latin(char32_t cp) {
  if (cp >= 0xC0 && cp <= 0xFF) {
    static constexpr const char* kLatin1[64] = {
        "A", "A", "A", "A", "A", "A", "AE", "C",   // C0-C7
        "E", "E", "E", "E", "I", "I", "I",  "I",   // C8-CF
        "D", "N", "O", "O", "O", "O", "O",  "",    // D0-D7
        "O", "U", "U", "U", "U", "Y", "TH", "SS",  // D8-DF
        "A", "A", "A", "A", "A", "A", "AE", "C",   // E0-E7
        "E", "E", "E", "E", "I", "I", "I",  "I",   // E8-EF
        "D", "N", "O", "O", "O", "O", "O",  "",    // F0-F7
        "O", "U", "U", "U", "U", "Y", "TH", "Y"};  // F8-FF
    return kLatin1[cp - 0xC0];
  }
  if (cp < 0x100 || cp > 0x17F) return nullptr;
  struct Span {
    char32_t last;
    const char* base;
  };
  static constexpr Span kExtendedA[] = {
      {0x105, "A"},  {0x10D, "C"}, {0x111, "D"}, {0x11B, "E"}, {0x123, "G"},
      {0x127, "H"},  {0x131, "I"}, {0x133, "IJ"}, {0x135, "J"}, {0x138, "K"},
      {0x142, "L"},  {0x14B, "N"}, {0x151, "O"}, {0x153, "OE"}, {0x159, "R"},
      {0x161, "S"},  {0x167, "T"}, {0x173, "U"}, {0x175, "W"}, {0x178, "Y"},
      {0x17E, "Z"},  {0x17F, "S"}};
  for (const auto& span : kExtendedA) {
    if (cp <= span.last) return span.base;
  }
  return nullptr;
}

}  // namespace detail

inline std::string normalize_name(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  auto emit = [&](std::string_view piece) {
    if (piece.empty()) return;
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(piece);
  };

  std::size_t i = 0;
  while (i < raw.size()) {
    const char32_t cp = detail::decode_utf8(raw, i);
    if (detail::is_space(cp)) {
      pending_space = true;
    } else if (detail::is_dropped(cp)) {
      continue;
    } else if (cp < 0x80) {
      char ch = static_cast<char>(cp);
      if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
      emit(std::string_view(&ch, 1));
    } else if (const char* base = detail::fold_latin(cp)) {
      emit(base);
    } else {
      std::string encoded;
      detail::encode_utf8(cp, encoded);
      emit(encoded);
    }
  }
  return out;
}

}  // namespace procurisk
