#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <utility>
#include <vector>

#include "ocrforge/unicode.hpp"

using namespace ocrforge;

TEST_CASE("utf8 round trip") {
  std::vector<std::string> inputs = {"", "abc", "北川羌族自治县", "mixed 中文 and ascii",
                                     "\xc3\xa9"};
  for (const std::string& s : inputs) {
    CHECK(encode_utf8(decode_utf8(s)) == s);
  }
}

TEST_CASE("utf8 decoding is total on malformed bytes") {
  // Lone continuation, truncated sequence, overlong encoding, raw 0xFF.
  std::vector<std::string> junk = {"\x80", "\xc3", "\xc0\xaf", "\xff\xfe", "a\xe4\xb8"};
  for (const std::string& s : junk) {
    std::u32string cps = decode_utf8(s);
    CHECK(encode_utf8(cps) == s);  // byte-preserving even when invalid
  }
}

TEST_CASE("nfc matches frozen reference vectors") {
  static const std::pair<const char*, const char*> kCases[] = {
#include "nfc_cases.inc"
  };
  for (const auto& [input, expected] : kCases) {
    CAPTURE(input);
    CHECK(nfc_utf8(input) == expected);
  }
}

TEST_CASE("nfc is idempotent on the vectors") {
  static const std::pair<const char*, const char*> kCases[] = {
#include "nfc_cases.inc"
  };
  for (const auto& [input, _] : kCases) {
    std::string once = nfc_utf8(input);
    CHECK(nfc_utf8(once) == once);
  }
}

TEST_CASE("trim removes unicode whitespace at both ends") {
  CHECK(trim("  x  ") == "x");
  CHECK(trim("　全角　") == "全角");
  CHECK(trim("\t\n") == "");
  CHECK(trim("a b") == "a b");
}
