#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ocrforge/errors.hpp"
#include "ocrforge/latex.hpp"

namespace ocrforge {

// Token-level detection-matching proxy score. `matched` is the length of the
// longest common subsequence of the normalized token sequences; `value` is
// the F-measure 2*matched / (total_pred + total_gt).
struct CdmScore {
  std::size_t matched = 0;
  std::size_t total_pred = 0;
  std::size_t total_gt = 0;
  double value = 0.0;
};

namespace detail {

inline std::size_t lcs_length(const LatexTokenSeq& a, const LatexTokenSeq& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  if (n == 0 || m == 0) return 0;
  std::vector<std::size_t> prev(m + 1, 0);
  std::vector<std::size_t> cur(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace detail

// Ordering-aware glyph-match proxy on normalized LaTeX token sequences.
// Unlike the rendering-based original it needs no TeX stack and is exactly
// reproducible per rewrite-table version.
inline CdmScore cdm_proxy(std::string_view pred, std::string_view gt,
                          const RewriteTable& table = RewriteTable::builtin()) {
  LatexTokenSeq p = normalized_latex_tokens(pred, table);
  LatexTokenSeq g = normalized_latex_tokens(gt, table);
  CdmScore score;
  score.total_pred = p.size();
  score.total_gt = g.size();
  score.matched = detail::lcs_length(p, g);
  std::size_t denom = score.total_pred + score.total_gt;
  score.value = denom == 0 ? 1.0 : 2.0 * static_cast<double>(score.matched) /
                                       static_cast<double>(denom);
  return score;
}

// Fraction of scores that are exact proxy matches (value == 1.0).
inline double exprate(std::span<const CdmScore> scores) {
  if (scores.empty()) throw EmptyBatchError("exprate over empty batch");
  std::size_t exact = 0;
  for (const CdmScore& s : scores) {
    if (s.value == 1.0) ++exact;
  }
  return static_cast<double>(exact) / static_cast<double>(scores.size());
}

}  // namespace ocrforge
