#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ocrforge/errors.hpp"
#include "ocrforge/unicode.hpp"

namespace ocrforge {

enum class TableTag { Table, Thead, Tbody, Tr, Td };

inline const char* to_string(TableTag t) {
  switch (t) {
    case TableTag::Table: return "table";
    case TableTag::Thead: return "thead";
    case TableTag::Tbody: return "tbody";
    case TableTag::Tr: return "tr";
    case TableTag::Td: return "td";
  }
  return "?";
}

// Ordered labeled tree for an HTML table. Only Td nodes carry text; headers
// are normalized to Td and the header/body distinction lives in Thead/Tbody.
struct TableNode {
  TableTag tag = TableTag::Table;
  int colspan = 1;
  int rowspan = 1;
  std::string text;
  std::vector<TableNode> children;
};

using TableTree = TableNode;

inline std::size_t tree_size(const TableNode& node) {
  std::size_t n = 1;
  for (const TableNode& c : node.children) n += tree_size(c);
  return n;
}

namespace detail {

struct RawTag {
  std::string name;  // lowercased
  bool closing = false;
  std::vector<std::pair<std::string, std::string>> attrs;
  std::size_t end = 0;  // one past '>'
};

inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == ':';
}

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Attempts to read a tag starting at html[pos] == '<'. Returns nothing when
// the text is not a plausible tag, so stray '<' characters stay literal.
inline std::optional<RawTag> try_parse_tag(std::string_view html, std::size_t pos) {
  std::size_t i = pos + 1;
  RawTag tag;
  if (i < html.size() && html[i] == '/') {
    tag.closing = true;
    ++i;
  }
  std::size_t name_begin = i;
  while (i < html.size() && is_name_char(html[i])) ++i;
  if (i == name_begin) return std::nullopt;
  if (!std::isalpha(static_cast<unsigned char>(html[name_begin]))) return std::nullopt;
  tag.name = ascii_lower(html.substr(name_begin, i - name_begin));

  // Attribute soup until '>'; quoted values may contain '>'.
  while (i < html.size() && html[i] != '>') {
    if (std::isspace(static_cast<unsigned char>(html[i])) || html[i] == '/') {
      ++i;
      continue;
    }
    std::size_t key_begin = i;
    while (i < html.size() && html[i] != '=' && html[i] != '>' && html[i] != '/' &&
           !std::isspace(static_cast<unsigned char>(html[i]))) {
      ++i;
    }
    std::string key = ascii_lower(html.substr(key_begin, i - key_begin));
    while (i < html.size() && std::isspace(static_cast<unsigned char>(html[i]))) ++i;
    std::string value;
    if (i < html.size() && html[i] == '=') {
      ++i;
      while (i < html.size() && std::isspace(static_cast<unsigned char>(html[i]))) ++i;
      if (i < html.size() && (html[i] == '"' || html[i] == '\'')) {
        char quote = html[i++];
        std::size_t val_begin = i;
        while (i < html.size() && html[i] != quote) ++i;
        value = std::string(html.substr(val_begin, i - val_begin));
        if (i < html.size()) ++i;
      } else {
        std::size_t val_begin = i;
        while (i < html.size() && html[i] != '>' &&
               !std::isspace(static_cast<unsigned char>(html[i]))) {
          ++i;
        }
        value = std::string(html.substr(val_begin, i - val_begin));
      }
    }
    if (!key.empty()) tag.attrs.emplace_back(std::move(key), std::move(value));
  }
  if (i >= html.size()) return std::nullopt;  // unterminated tag: keep literal
  tag.end = i + 1;
  return tag;
}

// default 1 on absence or attribute garbage; HTML-style integer prefix parse
inline int parse_span_attr(const RawTag& tag, std::string_view key) {
  for (const auto& [k, v] : tag.attrs) {
    if (k != key) continue;
    std::size_t i = 0;
    while (i < v.size() && std::isspace(static_cast<unsigned char>(v[i]))) ++i;
    long value = 0;
    bool any = false;
    while (i < v.size() && std::isdigit(static_cast<unsigned char>(v[i]))) {
      value = value * 10 + (v[i] - '0');
      any = true;
      if (value > 10000) value = 10000;
      ++i;
    }
    if (!any || value < 1) return 1;
    return static_cast<int>(value);
  }
  return 1;
}

inline char32_t named_entity(std::string_view name) {
  if (name == "amp") return '&';
  if (name == "lt") return '<';
  if (name == "gt") return '>';
  if (name == "quot") return '"';
  if (name == "apos") return '\'';
  if (name == "nbsp") return 0xA0;
  return 0;
}

// Entity decode + whitespace collapse (NBSP counts as whitespace) + trim.
inline std::string normalize_cell_text(std::string_view raw) {
  std::string decoded;
  decoded.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] != '&') {
      decoded.push_back(raw[i++]);
      continue;
    }
    std::size_t semi = raw.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      decoded.push_back(raw[i++]);
      continue;
    }
    std::string_view body = raw.substr(i + 1, semi - i - 1);
    char32_t cp = 0;
    if (!body.empty() && body[0] == '#') {
      std::string_view digits = body.substr(1);
      int base = 10;
      if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
        base = 16;
        digits = digits.substr(1);
      }
      uint64_t value = 0;
      bool ok = !digits.empty();
      for (char c : digits) {
        int d;
        if (c >= '0' && c <= '9') {
          d = c - '0';
        } else if (base == 16 && c >= 'a' && c <= 'f') {
          d = c - 'a' + 10;
        } else if (base == 16 && c >= 'A' && c <= 'F') {
          d = c - 'A' + 10;
        } else {
          ok = false;
          break;
        }
        value = value * static_cast<uint64_t>(base) + static_cast<uint64_t>(d);
        if (value > 0x10FFFF) {
          ok = false;
          break;
        }
      }
      if (ok && value > 0 && !(value >= 0xD800 && value <= 0xDFFF)) cp = static_cast<char32_t>(value);
    } else {
      cp = named_entity(body);
    }
    if (cp == 0) {
      decoded.push_back(raw[i++]);
      continue;
    }
    append_utf8(decoded, cp);
    i = semi + 1;
  }

  std::u32string cps = decode_utf8(decoded);
  std::u32string collapsed;
  collapsed.reserve(cps.size());
  bool pending_space = false;
  for (char32_t cp : cps) {
    if (is_unicode_space(cp)) {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) collapsed.push_back(' ');
    pending_space = false;
    collapsed.push_back(cp);
  }
  return encode_utf8(collapsed);
}

class TableBuilder {
 public:
  TableBuilder() { root_.tag = TableTag::Table; }

  void open_section(TableTag tag) {
    close_cell();
    close_row();
    close_section();
    TableNode section;
    section.tag = tag;
    root_.children.push_back(std::move(section));
    section_open_ = true;
  }

  void close_section_tag() {
    close_cell();
    close_row();
    close_section();
  }

  void open_row() {
    close_cell();
    close_row();
    ensure_section();
    TableNode row;
    row.tag = TableTag::Tr;
    root_.children.back().children.push_back(std::move(row));
    row_open_ = true;
  }

  void close_row_tag() {
    close_cell();
    close_row();
  }

  void open_cell(int colspan, int rowspan) {
    close_cell();
    if (!row_open_) open_row();
    TableNode cell;
    cell.tag = TableTag::Td;
    cell.colspan = colspan;
    cell.rowspan = rowspan;
    root_.children.back().children.back().children.push_back(std::move(cell));
    cell_open_ = true;
    cell_text_.clear();
  }

  void close_cell_tag() { close_cell(); }

  void append_text(std::string_view text) {
    if (cell_open_) cell_text_.append(text);
  }

  bool cell_open() const { return cell_open_; }

  TableNode finish() {
    close_cell();
    return std::move(root_);
  }

 private:
  void ensure_section() {
    if (!section_open_) {
      TableNode tbody;
      tbody.tag = TableTag::Tbody;
      root_.children.push_back(std::move(tbody));
      section_open_ = true;
    }
  }

  void close_cell() {
    if (!cell_open_) return;
    root_.children.back().children.back().children.back().text = normalize_cell_text(cell_text_);
    cell_text_.clear();
    cell_open_ = false;
  }

  void close_row() { row_open_ = false; }
  void close_section() { section_open_ = false; }

  TableNode root_;
  bool section_open_ = false;
  bool row_open_ = false;
  bool cell_open_ = false;
  std::string cell_text_;
};

}  // namespace detail

// Parses the first <table> element of `html` into a normalized tree. The
// parser is total over tag and attribute garbage: unknown tags are stripped,
// <th> becomes Td, rows outside an explicit section land in an implicit
// Tbody, and colspan/rowspan fall back to 1 when unparseable.
//
// Throws NoTableFoundError when no <table> element exists.
inline TableTree parse_html_table(std::string_view html) {
  using detail::RawTag;

  // Locate the opening <table> tag.
  std::size_t pos = 0;
  std::optional<RawTag> open;
  while (pos < html.size()) {
    pos = html.find('<', pos);
    if (pos == std::string_view::npos) break;
    if (html.substr(pos, 4) == "<!--") {
      std::size_t end = html.find("-->", pos);
      pos = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    std::optional<RawTag> tag = detail::try_parse_tag(html, pos);
    if (tag && !tag->closing && tag->name == "table") {
      open = tag;
      break;
    }
    pos = tag ? tag->end : pos + 1;
  }
  if (!open) throw NoTableFoundError();

  detail::TableBuilder builder;
  std::size_t i = open->end;
  while (i < html.size()) {
    std::size_t lt = html.find('<', i);
    if (lt == std::string_view::npos) {
      builder.append_text(html.substr(i));
      break;
    }
    builder.append_text(html.substr(i, lt - i));
    if (html.substr(lt, 4) == "<!--") {
      std::size_t end = html.find("-->", lt);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    std::optional<RawTag> tag = detail::try_parse_tag(html, lt);
    if (!tag) {
      builder.append_text(html.substr(lt, 1));
      i = lt + 1;
      continue;
    }
    i = tag->end;
    const std::string& name = tag->name;
    if (name == "table") {
      if (tag->closing) break;  // nested opens are stripped like unknown tags
      continue;
    }
    if (name == "thead" || name == "tbody" || name == "tfoot") {
      if (tag->closing) {
        builder.close_section_tag();
      } else {
        builder.open_section(name == "thead" ? TableTag::Thead : TableTag::Tbody);
      }
    } else if (name == "tr") {
      if (tag->closing) {
        builder.close_row_tag();
      } else {
        builder.open_row();
      }
    } else if (name == "td" || name == "th") {
      if (tag->closing) {
        builder.close_cell_tag();
      } else {
        builder.open_cell(detail::parse_span_attr(*tag, "colspan"),
                          detail::parse_span_attr(*tag, "rowspan"));
      }
    } else if (name == "br" && !tag->closing) {
      builder.append_text(" ");
    }
    // Everything else (caption, colgroup, inline markup, ...) is stripped;
    // its text contributes only when a cell is open.
  }
  return builder.finish();
}

}  // namespace ocrforge
