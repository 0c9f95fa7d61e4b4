#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace semprosody::utf8 {

/// One decoded code point and the byte range it occupied.
struct CodePoint {
  char32_t value;
  std::size_t byte_offset;
  std::size_t byte_length;
};

/// Decodes UTF-8. Invalid sequences decode to U+FFFD, one byte at a time,
/// so byte offsets always tile the input.
inline std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = 0xFFFD;
    if (b0 < 0x80) {
      cp = b0;
    } else {
      std::size_t need = 0;
      char32_t acc = 0;
      if ((b0 & 0xE0) == 0xC0) {
        need = 1;
        acc = b0 & 0x1F;
      } else if ((b0 & 0xF0) == 0xE0) {
        need = 2;
        acc = b0 & 0x0F;
      } else if ((b0 & 0xF8) == 0xF0) {
        need = 3;
        acc = b0 & 0x07;
      }
      bool ok = need > 0 && i + need < s.size();
      for (std::size_t k = 1; ok && k <= need; ++k) {
        const auto bk = static_cast<unsigned char>(s[i + k]);
        if ((bk & 0xC0) != 0x80)
          ok = false;
        else
          acc = (acc << 6) | (bk & 0x3F);
      }
      if (ok) {
        cp = acc;
        len = need + 1;
      }
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

/// True when every byte sequence is well-formed UTF-8.
inline bool valid(std::string_view s) {
  for (const auto &cp : decode(s))
    if (cp.value == 0xFFFD && s.compare(cp.byte_offset, cp.byte_length, "\xEF\xBF\xBD") != 0)
      return false;
  return true;
}

inline void append(std::string &out, char32_t cp) {
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

inline std::size_t length(std::string_view s) { return decode(s).size(); }

inline bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
         c == U'\v' || c == 0x00A0 || c == 0x3000 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x202F || c == 0x205F;
}

/// CJK unified ideographs (all planes in common use) and compatibility forms.
inline bool is_cjk(char32_t c) {
  return (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF) ||
         (c >= 0xF900 && c <= 0xFAFF) || (c >= 0x20000 && c <= 0x2FA1F) ||
         c == 0x3007;
}

inline bool is_punct(char32_t c) {
  if (c < 0x80)
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  switch (c) {
  case 0x00A1: // ¡
  case 0x00BF: // ¿
  case 0x00AB: // «
  case 0x00BB: // »
  case 0x00B7: // ·
  case 0x2026: // …
    return true;
  default:
    break;
  }
  if (c >= 0x2010 && c <= 0x2027)
    return true; // dashes, quotes, bullets
  if (c >= 0x3001 && c <= 0x3003)
    return true; // 、。〃
  if (c >= 0x3008 && c <= 0x3011)
    return true; // 〈〉《》「」『』【】
  if (c >= 0x3014 && c <= 0x301F)
    return true;
  if (c >= 0xFF01 && c <= 0xFF0F)
    return true; // fullwidth ！＂＃…／
  if (c >= 0xFF1A && c <= 0xFF20)
    return true; // ：；＜＝＞？＠
  if (c >= 0xFF3B && c <= 0xFF40)
    return true;
  if (c >= 0xFF5B && c <= 0xFF65)
    return true;
  return false;
}

/// Lower-cases ASCII and Latin-1 letters; everything else is unchanged.
inline char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z')
    return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7)
    return c + 32;
  return c;
}

inline std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const auto &cp : decode(s))
    append(out, to_lower(cp.value));
  return out;
}

inline bool is_punct_token(std::string_view s) {
  const auto cps = decode(s);
  if (cps.empty())
    return false;
  for (const auto &cp : cps)
    if (!is_punct(cp.value))
      return false;
  return true;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace semprosody::utf8
