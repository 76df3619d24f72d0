#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include "ocrforge/text_metrics.hpp"
#include "oracles.hpp"

using namespace ocrforge;

TEST_CASE("levenshtein basics") {
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
  // Frozen from the recursive oracle.
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("北川", "北山") == 1);  // code points, not bytes
}

TEST_CASE("levenshtein equals recursive oracle on 4-symbol strings") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 2000; ++i) {
    std::u32string a = oracle::random_string(rng, 8, U"abcd");
    std::u32string b = oracle::random_string(rng, 8, U"abcd");
    CHECK(detail::levenshtein_u32(a, b) == oracle::lev_recursive(a, b));
  }
}

TEST_CASE("levenshtein is a metric on random triples") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    std::u32string a = oracle::random_string(rng, 10, U"abcde");
    std::u32string b = oracle::random_string(rng, 10, U"abcde");
    std::u32string c = oracle::random_string(rng, 10, U"abcde");
    std::size_t ab = detail::levenshtein_u32(a, b);
    std::size_t ba = detail::levenshtein_u32(b, a);
    std::size_t bc = detail::levenshtein_u32(b, c);
    std::size_t ac = detail::levenshtein_u32(a, c);
    CHECK(ab == ba);
    CHECK((ab == 0) == (a == b));
    CHECK(ac <= ab + bc);
  }
}

TEST_CASE("ned examples") {
  CHECK(ned("abc", "abc").value == 0.0);
  CHECK(ned("ab", "abcd").value == 0.5);
  CHECK(ned("", "").value == 0.0);
  CHECK(ned("", "xy").value == 1.0);

  NedScore s = ned("ab", "abcd");
  CHECK(s.distance == 2);
  CHECK(s.len_pred == 2);
  CHECK(s.len_gt == 4);
}

TEST_CASE("ned value stays in [0,1]") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    std::u32string a = oracle::random_string(rng, 12, U"abc");
    std::u32string b = oracle::random_string(rng, 12, U"abc");
    NedScore s = ned(encode_utf8(a), encode_utf8(b));
    CHECK(s.value >= 0.0);
    CHECK(s.value <= 1.0);
  }
}

TEST_CASE("exact_match rules") {
  const char* gt = "北川羌族自治县永安镇工农村 第九村民小组";
  CHECK(exact_match(gt, gt) == 1.0);
  CHECK(exact_match("北川羌族自治县农村信用合作联社永安分社", gt) == 0.0);
  CHECK(exact_match(" x", "x") == 1.0);
  CHECK(exact_match("x ", "\tx\n") == 1.0);
  CHECK(exact_match("a b", "ab") == 0.0);  // interior whitespace preserved
  // NFC: combining sequence vs precomposed.
  CHECK(exact_match("é", "é") == 1.0);
  // No width folding: full-width A differs from ASCII A.
  CHECK(exact_match("Ａ", "A") == 0.0);
}

TEST_CASE("exact match implies zero ned on normalized forms") {
  std::vector<std::pair<std::string, std::string>> pairs = {
      {" x", "x"}, {"é", "é"}, {"中文 ", "中文"}};
  for (const auto& [p, g] : pairs) {
    REQUIRE(exact_match(p, g) == 1.0);
    CHECK(ned(nfc_utf8(trim(p)), nfc_utf8(trim(g))).value == 0.0);
  }
}
