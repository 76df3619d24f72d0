#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ocrforge/chain.hpp"
#include "oracles.hpp"

using namespace ocrforge;

namespace {

bool has_violation(const FormatVerdict& v, ViolationKind kind) {
  return std::any_of(v.violations.begin(), v.violations.end(),
                     [&](const Violation& x) { return x.kind == kind; });
}

}  // namespace

TEST_CASE("parse minimal well-formed chain") {
  auto result = parse_chain("<think>a</think><tool>b</tool><rethink>c</rethink><answer>d</answer>");
  REQUIRE(result.verdict.valid);
  REQUIRE(result.chain.has_value());
  CHECK(result.chain->think == "a");
  CHECK(result.chain->tool_blocks == std::vector<std::string>{"b"});
  CHECK(result.chain->rethink == "c");
  CHECK(result.chain->answer == "d");
}

TEST_CASE("missing tags are all reported") {
  auto result = parse_chain("<think>a</think><answer>d</answer>");
  REQUIRE_FALSE(result.verdict.valid);
  REQUIRE(result.verdict.violations.size() == 2);
  CHECK(result.verdict.violations[0].kind == ViolationKind::MissingTag);
  CHECK(result.verdict.violations[0].detail == "missing <tool>");
  CHECK(result.verdict.violations[1].kind == ViolationKind::MissingTag);
  CHECK(result.verdict.violations[1].detail == "missing <rethink>");
}

TEST_CASE("stray content before the first tag") {
  auto result =
      parse_chain("x<think>a</think><tool>b</tool><rethink>c</rethink><answer>d</answer>");
  REQUIRE_FALSE(result.verdict.valid);
  REQUIRE(result.verdict.violations.size() == 1);
  CHECK(result.verdict.violations[0].kind == ViolationKind::StrayContent);
  CHECK(result.verdict.violations[0].begin == 0);
  CHECK(result.verdict.violations[0].end == 1);
}

TEST_CASE("trailing prose after the answer") {
  auto result = parse_chain(
      "<think>a</think><tool>b</tool><rethink>c</rethink><answer>d</answer> trailing prose");
  CHECK_FALSE(result.verdict.valid);
  CHECK(has_violation(result.verdict, ViolationKind::StrayContent));
}

TEST_CASE("whitespace-only gaps between tags are permitted") {
  auto result = parse_chain(
      "<think>a</think>  \n\t<tool>b</tool>\n<rethink>c</rethink>\n\n<answer>d</answer>\n");
  CHECK(result.verdict.valid);
}

TEST_CASE("duplicate tags") {
  auto result = parse_chain(
      "<think>a</think><think>a2</think><tool>b</tool><rethink>c</rethink><answer>d</answer>");
  CHECK_FALSE(result.verdict.valid);
  CHECK(has_violation(result.verdict, ViolationKind::DuplicateTag));
}

TEST_CASE("multiple tool blocks are valid") {
  auto result = parse_chain(
      "<think>a</think><tool>t1</tool><tool>t2</tool><rethink>c</rethink><answer>d</answer>");
  REQUIRE(result.verdict.valid);
  CHECK(result.chain->tool_blocks == std::vector<std::string>{"t1", "t2"});
}

TEST_CASE("unclosed tag") {
  auto result = parse_chain("<think>a<tool>b</tool><rethink>c</rethink><answer>d</answer>");
  CHECK_FALSE(result.verdict.valid);
  CHECK(has_violation(result.verdict, ViolationKind::UnclosedTag));
}

TEST_CASE("nested chain tags invalidate") {
  auto result = parse_chain(
      "<think>a<answer>x</answer></think><tool>b</tool><rethink>c</rethink><answer>d</answer>");
  CHECK_FALSE(result.verdict.valid);
}

TEST_CASE("tool blocks interleaved out of order") {
  auto result = parse_chain(
      "<think>a</think><tool>t1</tool><rethink>c</rethink><tool>t2</tool><answer>d</answer>");
  CHECK_FALSE(result.verdict.valid);
  CHECK(has_violation(result.verdict, ViolationKind::OrderViolation));
}

TEST_CASE("tag matching is exact and case-sensitive") {
  CHECK_FALSE(parse_chain("<THINK>a</THINK><tool>b</tool><rethink>c</rethink><answer>d</answer>")
                  .verdict.valid);
  CHECK_FALSE(
      parse_chain("<think >a</think><tool>b</tool><rethink>c</rethink><answer>d</answer>")
          .verdict.valid);
}

TEST_CASE("bodies keep surrounding whitespace verbatim") {
  auto result = parse_chain(
      "<think>  spaced  </think><tool>\nb\n</tool><rethink>c</rethink><answer> d </answer>");
  REQUIRE(result.verdict.valid);
  CHECK(result.chain->think == "  spaced  ");
  CHECK(result.chain->tool_blocks[0] == "\nb\n");
  CHECK(result.chain->answer == " d ");
}

TEST_CASE("render produces the canonical serialization") {
  ReasoningChain c{"a", {"b"}, "c", "d"};
  CHECK(render_chain(c) == "<think>a</think>\n<tool>b</tool>\n<rethink>c</rethink>\n<answer>d</answer>");
}

TEST_CASE("round trip over generated chains") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 500; ++i) {
    ReasoningChain chain = oracle::random_chain(rng);
    auto result = parse_chain(render_chain(chain));
    REQUIRE(result.verdict.valid);
    CHECK(*result.chain == chain);
    CHECK(format_reward(render_chain(chain)) == 1.0);
  }
}

TEST_CASE("format reward examples") {
  CHECK(format_reward("<think>a</think><tool>b</tool><rethink>c</rethink><answer>d</answer>") ==
        1.0);
  CHECK(format_reward(
            "<think>a</think><tool>b</tool><rethink>c</rethink><answer>d</answer>done!") == 0.0);
  CHECK(format_reward("<think>a</think><rethink>c</rethink><tool>b</tool><answer>d</answer>") ==
        0.0);
  CHECK(format_reward("no tags at all") == 0.0);
  CHECK(format_reward("") == 0.0);
}

TEST_CASE("exactly the canonical ordering of the four tags scores 1.0") {
  const std::vector<std::pair<std::string, std::string>> sections = {
      {"think", "a"}, {"tool", "b"}, {"rethink", "c"}, {"answer", "d"}};
  std::vector<int> perm{0, 1, 2, 3};
  int valid_count = 0;
  do {
    std::string raw;
    for (int idx : perm) {
      raw += "<" + sections[idx].first + ">" + sections[idx].second + "</" +
             sections[idx].first + ">";
    }
    double reward = format_reward(raw);
    bool canonical = perm == std::vector<int>{0, 1, 2, 3};
    CHECK(reward == (canonical ? 1.0 : 0.0));
    if (reward == 1.0) ++valid_count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(valid_count == 1);
}

TEST_CASE("reward invariant under tag-free body edits") {
  std::string base = "<think>@BODY@</think><tool>b</tool><rethink>c</rethink><answer>d</answer>";
  for (const char* body : {"", "x", "multi\nline", "html <td>cell</td>", "括号（中文）"}) {
    std::string raw = base;
    raw.replace(raw.find("@BODY@"), 6, body);
    CHECK(format_reward(raw) == 1.0);
  }
}

TEST_CASE("deleting any required tag pair drops the reward to zero") {
  ReasoningChain chain{"a", {"b"}, "c", "d"};
  std::string canonical = render_chain(chain);
  REQUIRE(format_reward(canonical) == 1.0);
  for (const char* tag : {"think", "tool", "rethink", "answer"}) {
    std::string open = std::string("<") + tag + ">";
    std::string close = std::string("</") + tag + ">";
    std::string mutated = canonical;
    std::size_t ob = mutated.find(open);
    std::size_t cb = mutated.find(close);
    REQUIRE(ob != std::string::npos);
    // Remove the whole section, tags and body.
    mutated.erase(ob, cb + close.size() - ob);
    CHECK(format_reward(mutated) == 0.0);
  }
}

TEST_CASE("verdict validity equals empty violations") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    std::string raw = render_chain(oracle::random_chain(rng));
    if (i % 2 == 0) raw += "junk";  // spoil half of them
    auto result = parse_chain(raw);
    CHECK(result.verdict.valid == result.verdict.violations.empty());
    CHECK(result.chain.has_value() == result.verdict.valid);
  }
}
