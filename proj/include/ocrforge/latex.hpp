#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ocrforge/errors.hpp"
#include "ocrforge/unicode.hpp"

namespace ocrforge {

enum class LatexTokenKind {
  Command,
  Symbol,
  Digit,
  Letter,
  GroupOpen,
  GroupClose,
  Relation,
  Operator,
};

struct LatexToken {
  LatexTokenKind kind = LatexTokenKind::Symbol;
  std::string lexeme;

  bool operator==(const LatexToken&) const = default;
};

using LatexTokenSeq = std::vector<LatexToken>;

namespace detail {

inline bool is_ascii_letter(char32_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline LatexTokenKind classify_char(char32_t c) {
  if (c >= '0' && c <= '9') return LatexTokenKind::Digit;
  if (is_ascii_letter(c)) return LatexTokenKind::Letter;
  switch (c) {
    case '=':
    case '<':
    case '>':
      return LatexTokenKind::Relation;
    case '+':
    case '-':
    case '*':
    case '/':
    case '^':
    case '_':
    case '!':
    case '|':
    case '\'':
      return LatexTokenKind::Operator;
    default:
      return LatexTokenKind::Symbol;
  }
}

inline std::u32string strip_math_delimiters(std::u32string s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_unicode_space(s[b])) ++b;
  while (e > b && is_unicode_space(s[e - 1])) --e;
  auto starts = [&](std::u32string_view prefix) {
    return e - b >= prefix.size() && std::u32string_view(s).substr(b, prefix.size()) == prefix;
  };
  auto ends = [&](std::u32string_view suffix) {
    return e - b >= suffix.size() &&
           std::u32string_view(s).substr(e - suffix.size(), suffix.size()) == suffix;
  };
  if (starts(U"$$") && ends(U"$$") && e - b >= 4) {
    b += 2;
    e -= 2;
  } else if (starts(U"$") && ends(U"$") && e - b >= 2) {
    b += 1;
    e -= 1;
  } else if (starts(U"\\[") && ends(U"\\]") && e - b >= 4) {
    b += 2;
    e -= 2;
  } else if (starts(U"\\(") && ends(U"\\)") && e - b >= 4) {
    b += 2;
    e -= 2;
  }
  return s.substr(b, e - b);
}

}  // namespace detail

// Total lexer for LaTeX math. Whitespace never produces tokens; commands are
// maximal-munch \name sequences; a backslash escaping one non-letter is a
// single Command token; every other non-space character is one token.
inline LatexTokenSeq tokenize_latex(std::string_view src) {
  std::u32string input = detail::strip_math_delimiters(decode_utf8(src));
  LatexTokenSeq tokens;
  std::size_t i = 0;
  while (i < input.size()) {
    char32_t c = input[i];
    if (is_unicode_space(c)) {
      ++i;
      continue;
    }
    if (c == '\\') {
      std::size_t j = i + 1;
      while (j < input.size() && detail::is_ascii_letter(input[j])) ++j;
      if (j == i + 1 && j < input.size()) ++j;  // single escaped non-letter
      std::string lexeme = encode_utf8(input.substr(i, j - i));
      tokens.push_back({LatexTokenKind::Command, std::move(lexeme)});
      i = j;
      continue;
    }
    LatexTokenKind kind;
    if (c == '{') {
      kind = LatexTokenKind::GroupOpen;
    } else if (c == '}') {
      kind = LatexTokenKind::GroupClose;
    } else {
      kind = detail::classify_char(c);
    }
    std::string lexeme;
    append_utf8(lexeme, c);
    tokens.push_back({kind, std::move(lexeme)});
    ++i;
  }
  return tokens;
}

// One rewrite: a token-sequence pattern replaced by a token sequence.
struct RewriteRule {
  LatexTokenSeq pattern;
  LatexTokenSeq replacement;
};

// Alias-folding table for normalization. The table is versioned data: scores
// are only comparable across runs using the same table version.
struct RewriteTable {
  std::string version = "0";
  std::vector<RewriteRule> rules;

  // Format: UTF-8, one rule per line, pattern<TAB>replacement, '#' comments.
  // A "# version: <v>" comment sets the table version.
  static RewriteTable parse(std::string_view text) {
    RewriteTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      std::string_view line =
          eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty()) continue;
      if (line[0] == '#') {
        constexpr std::string_view kVersionPrefix = "# version:";
        if (line.substr(0, kVersionPrefix.size()) == kVersionPrefix) {
          table.version = trim(line.substr(kVersionPrefix.size()));
        }
        continue;
      }
      std::size_t tab = line.find('\t');
      std::string_view pattern = tab == std::string_view::npos ? line : line.substr(0, tab);
      std::string_view replacement =
          tab == std::string_view::npos ? std::string_view{} : line.substr(tab + 1);
      RewriteRule rule{tokenize_latex(pattern), tokenize_latex(replacement)};
      if (rule.pattern.empty()) {
        throw ConfigError("rewrite table line " + std::to_string(line_no) + ": empty pattern");
      }
      table.rules.push_back(std::move(rule));
    }
    return table;
  }

  static RewriteTable load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open rewrite table: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  static const RewriteTable& builtin();
};

namespace detail {

// data/latex_rewrites.tsv ships the same content for external use.
inline constexpr const char* kBuiltinRewrites =
    "# version: 1\n"
    "# Spacing commands carry no glyphs.\n"
    "\\,\t\n"
    "\\;\t\n"
    "\\:\t\n"
    "\\!\t\n"
    "\\quad\t\n"
    "\\qquad\t\n"
    "\\ \t\n"
    "# Sizing wrappers fold onto the bare delimiter.\n"
    "\\left(\t(\n"
    "\\right)\t)\n"
    "\\left[\t[\n"
    "\\right]\t]\n"
    "\\left\\{\t\\{\n"
    "\\right\\}\t\\}\n"
    "\\left|\t|\n"
    "\\right|\t|\n"
    "\\left.\t\n"
    "\\right.\t\n"
    "\\big(\t(\n"
    "\\big)\t)\n"
    "\\Big(\t(\n"
    "\\Big)\t)\n"
    "# Visual aliases.\n"
    "\\dfrac\t\\frac\n"
    "\\tfrac\t\\frac\n"
    "\\cfrac\t\\frac\n"
    "\\le\t\\leq\n"
    "\\ge\t\\geq\n"
    "\\ne\t\\neq\n"
    "\\to\t\\rightarrow\n"
    "\\lbrace\t\\{\n"
    "\\rbrace\t\\}\n"
    "\\lbrack\t[\n"
    "\\rbrack\t]\n"
    "\\vert\t|\n"
    "\\mathrm{d}\td\n"
    "\\operatorname*\t\\operatorname\n";

inline bool match_at(const LatexTokenSeq& seq, std::size_t pos, const LatexTokenSeq& pattern) {
  if (pos + pattern.size() > seq.size()) return false;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    if (!(seq[pos + k] == pattern[k])) return false;
  }
  return true;
}

// One left-to-right pass of table rules; first matching rule wins per site.
inline bool apply_rules_once(LatexTokenSeq& seq, const RewriteTable& table) {
  LatexTokenSeq out;
  out.reserve(seq.size());
  bool changed = false;
  std::size_t i = 0;
  while (i < seq.size()) {
    const RewriteRule* hit = nullptr;
    for (const RewriteRule& rule : table.rules) {
      if (match_at(seq, i, rule.pattern)) {
        hit = &rule;
        break;
      }
    }
    if (hit != nullptr) {
      out.insert(out.end(), hit->replacement.begin(), hit->replacement.end());
      i += hit->pattern.size();
      changed = true;
    } else {
      out.push_back(seq[i]);
      ++i;
    }
  }
  seq = std::move(out);
  return changed;
}

// { tok } -> tok for any single non-brace token.
inline bool drop_redundant_groups_once(LatexTokenSeq& seq) {
  LatexTokenSeq out;
  out.reserve(seq.size());
  bool changed = false;
  std::size_t i = 0;
  while (i < seq.size()) {
    if (i + 2 < seq.size() && seq[i].kind == LatexTokenKind::GroupOpen &&
        seq[i + 1].kind != LatexTokenKind::GroupOpen &&
        seq[i + 1].kind != LatexTokenKind::GroupClose &&
        seq[i + 2].kind == LatexTokenKind::GroupClose) {
      out.push_back(seq[i + 1]);
      i += 3;
      changed = true;
      continue;
    }
    out.push_back(seq[i]);
    ++i;
  }
  seq = std::move(out);
  return changed;
}

}  // namespace detail

inline const RewriteTable& RewriteTable::builtin() {
  static const RewriteTable table = RewriteTable::parse(detail::kBuiltinRewrites);
  return table;
}

// Applies the rewrite table and redundant-group removal to a fixed point.
// Idempotent for acyclic tables; the pass cap guards against pathological
// user-supplied rules.
inline LatexTokenSeq normalize_latex(LatexTokenSeq seq,
                                     const RewriteTable& table = RewriteTable::builtin()) {
  for (int pass = 0; pass < 64; ++pass) {
    bool changed = detail::apply_rules_once(seq, table);
    changed = detail::drop_redundant_groups_once(seq) || changed;
    if (!changed) break;
  }
  return seq;
}

inline LatexTokenSeq normalized_latex_tokens(std::string_view src,
                                             const RewriteTable& table = RewriteTable::builtin()) {
  return normalize_latex(tokenize_latex(src), table);
}

}  // namespace ocrforge
