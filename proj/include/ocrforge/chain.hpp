#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ocrforge {

// A reasoning-and-tool chain: the model's own recognition, one or more tool
// result blocks, a reflection, and the final answer.
struct ReasoningChain {
  std::string think;
  std::vector<std::string> tool_blocks;
  std::string rethink;
  std::string answer;

  bool operator==(const ReasoningChain&) const = default;
};

enum class ViolationKind { MissingTag, DuplicateTag, OrderViolation, StrayContent, UnclosedTag };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::MissingTag: return "MissingTag";
    case ViolationKind::DuplicateTag: return "DuplicateTag";
    case ViolationKind::OrderViolation: return "OrderViolation";
    case ViolationKind::StrayContent: return "StrayContent";
    case ViolationKind::UnclosedTag: return "UnclosedTag";
  }
  return "?";
}

// One format violation; [begin, end) are byte offsets into the raw text.
struct Violation {
  ViolationKind kind;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string detail;
};

struct FormatVerdict {
  bool valid = false;
  std::vector<Violation> violations;
};

// Parse result: `chain` is set exactly when `verdict.valid`.
struct ChainParseResult {
  FormatVerdict verdict;
  std::optional<ReasoningChain> chain;
};

namespace detail {

enum class SectionKind { Think, Tool, Rethink, Answer };

inline const char* section_name(SectionKind k) {
  switch (k) {
    case SectionKind::Think: return "think";
    case SectionKind::Tool: return "tool";
    case SectionKind::Rethink: return "rethink";
    case SectionKind::Answer: return "answer";
  }
  return "?";
}

struct TagToken {
  SectionKind kind;
  bool closing;
  std::size_t begin;
  std::size_t end;
};

// Tag matching is exact and case-sensitive: literal ASCII tokens, no
// attributes, no whitespace inside the tag.
inline std::vector<TagToken> scan_tag_tokens(std::string_view raw) {
  static constexpr std::array<std::pair<std::string_view, SectionKind>, 4> kOpen = {{
      {"<think>", SectionKind::Think},
      {"<tool>", SectionKind::Tool},
      {"<rethink>", SectionKind::Rethink},
      {"<answer>", SectionKind::Answer},
  }};
  static constexpr std::array<std::pair<std::string_view, SectionKind>, 4> kClose = {{
      {"</think>", SectionKind::Think},
      {"</tool>", SectionKind::Tool},
      {"</rethink>", SectionKind::Rethink},
      {"</answer>", SectionKind::Answer},
  }};
  std::vector<TagToken> tokens;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '<') {
      ++i;
      continue;
    }
    bool matched = false;
    for (const auto& [lit, kind] : kOpen) {
      if (raw.substr(i, lit.size()) == lit) {
        tokens.push_back({kind, false, i, i + lit.size()});
        i += lit.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    for (const auto& [lit, kind] : kClose) {
      if (raw.substr(i, lit.size()) == lit) {
        tokens.push_back({kind, true, i, i + lit.size()});
        i += lit.size();
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return tokens;
}

struct Section {
  SectionKind kind;
  std::size_t begin;  // of the opening tag
  std::size_t end;    // one past the closing tag
  std::string body;
};

inline bool all_whitespace(std::string_view s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' && c != '\v') return false;
  }
  return true;
}

// Reports the non-whitespace extent of raw[begin, end) as StrayContent.
inline void report_stray_text(std::string_view raw, std::size_t begin, std::size_t end,
                              std::vector<Violation>& out) {
  std::string_view gap = raw.substr(begin, end - begin);
  if (all_whitespace(gap)) return;
  std::size_t b = begin;
  std::size_t e = end;
  while (b < e && all_whitespace(raw.substr(b, 1))) ++b;
  while (e > b && all_whitespace(raw.substr(e - 1, 1))) --e;
  out.push_back({ViolationKind::StrayContent, b, e, "content outside tag boundaries"});
}

}  // namespace detail

// Parses arbitrary rollout text against the chain format. Malformed input is
// not an error: the verdict carries every violation found, not just the first.
// Section bodies are preserved verbatim; whitespace-only gaps between tags are
// permitted and discarded.
inline ChainParseResult parse_chain(std::string_view raw) {
  using detail::Section;
  using detail::SectionKind;
  using detail::TagToken;

  ChainParseResult result;
  std::vector<Violation>& violations = result.verdict.violations;

  std::vector<TagToken> tokens = detail::scan_tag_tokens(raw);
  std::vector<Section> sections;

  // Pair open/close tokens sequentially; the format permits no nesting.
  std::optional<TagToken> open;
  std::size_t cursor = 0;  // start of the next uncovered region
  for (const TagToken& tok : tokens) {
    if (open) {
      if (tok.closing && tok.kind == open->kind) {
        sections.push_back({open->kind, open->begin, tok.end,
                            std::string(raw.substr(open->end, tok.begin - open->end))});
        open.reset();
        cursor = tok.end;
        continue;
      }
      // Any other tag token terminates the open section without closing it.
      violations.push_back({ViolationKind::UnclosedTag, open->begin, open->end,
                            std::string("unclosed <") + detail::section_name(open->kind) + ">"});
      open.reset();
      cursor = tok.begin;
    }
    detail::report_stray_text(raw, cursor, tok.begin, violations);
    if (tok.closing) {
      violations.push_back({ViolationKind::StrayContent, tok.begin, tok.end,
                            std::string("unmatched </") + detail::section_name(tok.kind) + ">"});
      cursor = tok.end;
    } else {
      open = tok;
      cursor = tok.end;
    }
  }
  if (open) {
    violations.push_back({ViolationKind::UnclosedTag, open->begin, open->end,
                          std::string("unclosed <") + detail::section_name(open->kind) + ">"});
  } else {
    detail::report_stray_text(raw, cursor, raw.size(), violations);
  }

  // Tag census: exactly one think/rethink/answer, one or more tool blocks.
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const Section& s : sections) ++counts[static_cast<int>(s.kind)];
  for (SectionKind k :
       {SectionKind::Think, SectionKind::Tool, SectionKind::Rethink, SectionKind::Answer}) {
    std::size_t n = counts[static_cast<int>(k)];
    if (n == 0) {
      violations.push_back({ViolationKind::MissingTag, 0, 0,
                            std::string("missing <") + detail::section_name(k) + ">"});
    } else if (n > 1 && k != SectionKind::Tool) {
      for (std::size_t i = 0, seen = 0; i < sections.size(); ++i) {
        if (sections[i].kind == k && ++seen > 1) {
          violations.push_back({ViolationKind::DuplicateTag, sections[i].begin, sections[i].end,
                                std::string("duplicate <") + detail::section_name(k) + ">"});
        }
      }
    }
  }

  // Order check: think, tool+, rethink, answer. Only meaningful once the
  // census is clean, otherwise the count violations already explain it.
  bool census_ok =
      counts[0] == 1 && counts[1] >= 1 && counts[2] == 1 && counts[3] == 1 && violations.empty();
  if (census_ok) {
    std::vector<SectionKind> expected;
    expected.push_back(SectionKind::Think);
    expected.insert(expected.end(), counts[1], SectionKind::Tool);
    expected.push_back(SectionKind::Rethink);
    expected.push_back(SectionKind::Answer);
    for (std::size_t i = 0; i < sections.size(); ++i) {
      if (sections[i].kind != expected[i]) {
        violations.push_back({ViolationKind::OrderViolation, sections[i].begin, sections[i].end,
                              std::string("<") + detail::section_name(sections[i].kind) +
                                  "> out of order"});
        break;
      }
    }
  }

  result.verdict.valid = violations.empty();
  if (result.verdict.valid) {
    ReasoningChain chain;
    chain.think = sections[0].body;
    for (std::size_t i = 1; i + 2 < sections.size(); ++i) chain.tool_blocks.push_back(sections[i].body);
    chain.rethink = sections[sections.size() - 2].body;
    chain.answer = sections[sections.size() - 1].body;
    result.chain = std::move(chain);
  }
  return result;
}

// Canonical serialization: tags in order, one newline between consecutive
// top-level tags, bodies verbatim.
inline std::string render_chain(const ReasoningChain& chain) {
  std::string out;
  out += "<think>";
  out += chain.think;
  out += "</think>";
  for (const std::string& tool : chain.tool_blocks) {
    out += "\n<tool>";
    out += tool;
    out += "</tool>";
  }
  out += "\n<rethink>";
  out += chain.rethink;
  out += "</rethink>";
  out += "\n<answer>";
  out += chain.answer;
  out += "</answer>";
  return out;
}

// Binary format reward: 1.0 iff the rollout is a well-formed chain.
inline double format_reward(std::string_view raw) {
  return parse_chain(raw).verdict.valid ? 1.0 : 0.0;
}

}  // namespace ocrforge
