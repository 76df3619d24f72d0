#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocrforge/errors.hpp"
#include "ocrforge/jsonl.hpp"
#include "ocrforge/unicode.hpp"

namespace ocrforge {

// Two-turn conversation template. Turn 1 asks the model to recognize on its
// own; turn 2 embeds the tool outputs (via {tool1}, {tool2}, ... placeholders
// inside a <tool> section) and asks for <rethink> and <answer>.
struct PromptTemplate {
  std::string turn1;
  std::string turn2;

  static PromptTemplate parse(std::string_view text) {
    constexpr std::string_view kTurn1 = "## Turn 1";
    constexpr std::string_view kTurn2 = "## Turn 2";
    std::size_t t1 = text.find(kTurn1);
    std::size_t t2 = text.find(kTurn2);
    if (t1 == std::string_view::npos || t2 == std::string_view::npos || t2 < t1) {
      throw ConfigError("template: expected '## Turn 1' followed by '## Turn 2'");
    }
    PromptTemplate tpl;
    tpl.turn1 = trim(text.substr(t1 + kTurn1.size(), t2 - t1 - kTurn1.size()));
    tpl.turn2 = trim(text.substr(t2 + kTurn2.size()));
    return tpl;
  }

  static PromptTemplate load_file(const std::string& path) {
    return parse(read_text_file(path));
  }

  // Checks the turn-2 layout against the number of configured tools.
  void validate(std::size_t n_tools) const {
    if (turn1.empty()) throw ConfigError("template: empty Turn 1 prompt");
    if (turn2.find("<tool>") == std::string::npos ||
        turn2.find("</tool>") == std::string::npos) {
      throw ConfigError("template: Turn 2 must contain a <tool>...</tool> section");
    }
    for (std::size_t k = 1; k <= n_tools; ++k) {
      std::string placeholder = "{tool" + std::to_string(k) + "}";
      if (turn2.find(placeholder) == std::string::npos) {
        throw ConfigError("template: Turn 2 missing placeholder " + placeholder);
      }
    }
  }

  // Substitutes {toolK} placeholders (1-based, positional) verbatim.
  std::string fill_turn2(const std::vector<std::string>& tool_outputs) const {
    std::string filled = turn2;
    for (std::size_t k = 0; k < tool_outputs.size(); ++k) {
      std::string placeholder = "{tool" + std::to_string(k + 1) + "}";
      std::size_t pos = 0;
      while ((pos = filled.find(placeholder, pos)) != std::string::npos) {
        filled.replace(pos, placeholder.size(), tool_outputs[k]);
        pos += tool_outputs[k].size();
      }
    }
    return filled;
  }
};

// First <tag>...</tag> body in `text`, or nothing.
inline std::optional<std::string> extract_tag_body(std::string_view text, std::string_view tag) {
  std::string open = "<" + std::string(tag) + ">";
  std::string close = "</" + std::string(tag) + ">";
  std::size_t b = text.find(open);
  if (b == std::string_view::npos) return std::nullopt;
  b += open.size();
  std::size_t e = text.find(close, b);
  if (e == std::string_view::npos) return std::nullopt;
  return std::string(text.substr(b, e - b));
}

}  // namespace ocrforge
