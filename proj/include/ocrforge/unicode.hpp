#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ocrforge/detail/nfc_tables.hpp"

namespace ocrforge {

namespace detail {

// Invalid UTF-8 bytes are mapped to 0xDC00+byte (lone low surrogates), the
// usual surrogate-escape scheme. Decoding is total and re-encoding restores
// the original byte sequence.
inline constexpr char32_t kByteEscapeBase = 0xDC00;

inline bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

}  // namespace detail

// Decodes UTF-8 into Unicode scalar values. Never fails; malformed bytes
// become surrogate-escaped sentinels so distances stay well defined on
// arbitrary model output.
inline std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
  while (i < text.size()) {
    unsigned char b0 = bytes[i];
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= text.size();
    if (ok) {
      for (int k = 1; k < len; ++k) {
        if (!detail::is_continuation(bytes[i + k])) {
          ok = false;
          break;
        }
        cp = (cp << 6) | (bytes[i + k] & 0x3F);
      }
    }
    if (ok) {
      // Reject overlong forms, surrogates, and out-of-range values.
      static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
      if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) ok = false;
    }
    if (!ok) {
      out.push_back(detail::kByteEscapeBase + b0);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp >= detail::kByteEscapeBase && cp < detail::kByteEscapeBase + 0x100) {
    out.push_back(static_cast<char>(cp - detail::kByteEscapeBase));
    return;
  }
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

inline std::string encode_utf8(const std::u32string& cps) {
  std::string out;
  out.reserve(cps.size() * 3);
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

// Unicode White_Space property (fixed small set).
inline bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x09:
    case 0x0A:
    case 0x0B:
    case 0x0C:
    case 0x0D:
    case 0x20:
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

namespace detail {

inline int combining_class(char32_t cp) {
  const uint32_t* begin = kCccKey;
  const uint32_t* end = kCccKey + sizeof(kCccKey) / sizeof(kCccKey[0]);
  const uint32_t* it = std::lower_bound(begin, end, static_cast<uint32_t>(cp));
  if (it != end && *it == cp) return kCccVal[it - begin];
  return 0;
}

inline constexpr char32_t kHangulSBase = 0xAC00;
inline constexpr char32_t kHangulLBase = 0x1100;
inline constexpr char32_t kHangulVBase = 0x1161;
inline constexpr char32_t kHangulTBase = 0x11A7;
inline constexpr int kHangulLCount = 19;
inline constexpr int kHangulVCount = 21;
inline constexpr int kHangulTCount = 28;
inline constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
inline constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

inline void canonical_decompose(char32_t cp, std::u32string& out) {
  if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
    char32_t s = cp - kHangulSBase;
    out.push_back(kHangulLBase + s / kHangulNCount);
    out.push_back(kHangulVBase + (s % kHangulNCount) / kHangulTCount);
    char32_t t = s % kHangulTCount;
    if (t != 0) out.push_back(kHangulTBase + t);
    return;
  }
  const uint32_t* begin = kDecompKey;
  const uint32_t* end = kDecompKey + sizeof(kDecompKey) / sizeof(kDecompKey[0]);
  const uint32_t* it = std::lower_bound(begin, end, static_cast<uint32_t>(cp));
  if (it != end && *it == cp) {
    std::size_t idx = it - begin;
    uint16_t off = kDecompOffset[idx];
    for (int k = 0; k < kDecompLen[idx]; ++k) out.push_back(kDecompPool[off + k]);
    return;
  }
  out.push_back(cp);
}

inline char32_t compose_pair(char32_t first, char32_t second) {
  // Hangul LV and LVT composition is algorithmic.
  if (first >= kHangulLBase && first < kHangulLBase + kHangulLCount &&
      second >= kHangulVBase && second < kHangulVBase + kHangulVCount) {
    return kHangulSBase + ((first - kHangulLBase) * kHangulVCount + (second - kHangulVBase)) *
                              kHangulTCount;
  }
  if (first >= kHangulSBase && first < kHangulSBase + kHangulSCount &&
      (first - kHangulSBase) % kHangulTCount == 0 && second > kHangulTBase &&
      second < kHangulTBase + kHangulTCount) {
    return first + (second - kHangulTBase);
  }
  uint64_t key = (static_cast<uint64_t>(first) << 21) | second;
  const uint64_t* begin = kComposeKey;
  const uint64_t* end = kComposeKey + sizeof(kComposeKey) / sizeof(kComposeKey[0]);
  const uint64_t* it = std::lower_bound(begin, end, key);
  if (it != end && *it == key) return kComposeVal[it - begin];
  return 0;
}

}  // namespace detail

// Canonical composition (NFC) over scalar values.
inline std::u32string nfc(const std::u32string& input) {
  // Decompose.
  std::u32string buf;
  buf.reserve(input.size() + 8);
  for (char32_t cp : input) detail::canonical_decompose(cp, buf);

  // Canonical ordering: stable-sort maximal runs of nonzero-class marks.
  std::size_t i = 0;
  while (i < buf.size()) {
    if (detail::combining_class(buf[i]) == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < buf.size() && detail::combining_class(buf[j]) != 0) ++j;
    std::stable_sort(buf.begin() + i, buf.begin() + j, [](char32_t a, char32_t b) {
      return detail::combining_class(a) < detail::combining_class(b);
    });
    i = j;
  }

  // Compose. A character may combine with the last starter when it directly
  // follows it, or when every intervening mark has a lower combining class.
  std::u32string out;
  out.reserve(buf.size());
  std::ptrdiff_t last_starter = -1;
  int last_cc = 0;  // class of the most recently appended character
  for (char32_t cp : buf) {
    int cc = detail::combining_class(cp);
    bool adjacent = last_starter == static_cast<std::ptrdiff_t>(out.size()) - 1;
    if (last_starter >= 0 && (adjacent || last_cc < cc)) {
      char32_t composed = detail::compose_pair(out[last_starter], cp);
      if (composed != 0) {
        out[last_starter] = composed;
        continue;
      }
    }
    out.push_back(cp);
    last_cc = cc;
    if (cc == 0) last_starter = static_cast<std::ptrdiff_t>(out.size()) - 1;
  }
  return out;
}

inline std::string nfc_utf8(std::string_view text) { return encode_utf8(nfc(decode_utf8(text))); }

// Trims Unicode whitespace from both ends (byte-level result stays UTF-8).
inline std::string trim(std::string_view text) {
  std::u32string cps = decode_utf8(text);
  std::size_t b = 0;
  std::size_t e = cps.size();
  while (b < e && is_unicode_space(cps[b])) ++b;
  while (e > b && is_unicode_space(cps[e - 1])) --e;
  return encode_utf8(cps.substr(b, e - b));
}

}  // namespace ocrforge
