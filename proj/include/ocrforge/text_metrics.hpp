#pragma once

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <vector>

#include "ocrforge/unicode.hpp"

namespace ocrforge {

// Normalized edit distance between two strings. `value` is the Levenshtein
// distance divided by the longer length; lower is better.
struct NedScore {
  std::size_t distance = 0;
  std::size_t len_pred = 0;
  std::size_t len_gt = 0;
  double value = 0.0;
};

namespace detail {

inline std::size_t levenshtein_u32(const std::u32string& a, const std::u32string& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1);
  std::vector<std::size_t> cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace detail

// Minimal number of insertions, deletions, and substitutions over Unicode
// scalar values (not bytes).
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  return detail::levenshtein_u32(decode_utf8(a), decode_utf8(b));
}

inline NedScore ned(std::string_view pred, std::string_view gt) {
  std::u32string p = decode_utf8(pred);
  std::u32string g = decode_utf8(gt);
  NedScore score;
  score.len_pred = p.size();
  score.len_gt = g.size();
  score.distance = detail::levenshtein_u32(p, g);
  std::size_t denom = std::max(score.len_pred, score.len_gt);
  // Both-empty is the identity case.
  score.value = denom == 0 ? 0.0 : static_cast<double>(score.distance) / static_cast<double>(denom);
  return score;
}

// 1.0 iff the two strings are identical after NFC normalization and trimming
// of leading/trailing whitespace. Interior whitespace is significant.
inline double exact_match(std::string_view pred, std::string_view gt) {
  return nfc_utf8(trim(pred)) == nfc_utf8(trim(gt)) ? 1.0 : 0.0;
}

}  // namespace ocrforge
