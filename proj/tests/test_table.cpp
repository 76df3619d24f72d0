#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include "ocrforge/table_tree.hpp"
#include "oracles.hpp"

using namespace ocrforge;

TEST_CASE("minimal table normalizes with an implicit tbody") {
  TableTree t = parse_html_table("<table><tr><td>a</td></tr></table>");
  REQUIRE(t.tag == TableTag::Table);
  REQUIRE(t.children.size() == 1);
  CHECK(t.children[0].tag == TableTag::Tbody);
  REQUIRE(t.children[0].children.size() == 1);
  CHECK(t.children[0].children[0].tag == TableTag::Tr);
  REQUIRE(t.children[0].children[0].children.size() == 1);
  const TableNode& cell = t.children[0].children[0].children[0];
  CHECK(cell.tag == TableTag::Td);
  CHECK(cell.text == "a");
  CHECK(cell.colspan == 1);
  CHECK(cell.rowspan == 1);
}

TEST_CASE("colspan and rowspan attributes pass through") {
  TableTree t = parse_html_table(R"(<table><tr><td colspan="2" rowspan='3'>a</td></tr></table>)");
  const TableNode& cell = t.children[0].children[0].children[0];
  CHECK(cell.colspan == 2);
  CHECK(cell.rowspan == 3);
}

TEST_CASE("unparseable span attributes fall back to 1") {
  TableTree t = parse_html_table(R"(<table><tr><td colspan="x">a</td></tr></table>)");
  CHECK(t.children[0].children[0].children[0].colspan == 1);
  t = parse_html_table(R"(<table><tr><td colspan="">a</td></tr></table>)");
  CHECK(t.children[0].children[0].children[0].colspan == 1);
  t = parse_html_table(R"(<table><tr><td colspan="0">a</td></tr></table>)");
  CHECK(t.children[0].children[0].children[0].colspan == 1);
  t = parse_html_table(R"(<table><tr><td colspan=2>a</td></tr></table>)");
  CHECK(t.children[0].children[0].children[0].colspan == 2);
}

TEST_CASE("attribute garbage never makes the parser fail") {
  std::mt19937_64 rng(5150);
  const std::string chars = R"( abc<>="'/x1%&;)";
  for (int i = 0; i < 500; ++i) {
    std::string attrs;
    std::size_t len = rng() % 20;
    for (std::size_t k = 0; k < len; ++k) attrs.push_back(chars[rng() % chars.size()]);
    std::string html = "<table><tr><td " + attrs + ">a</td></tr></table>";
    TableTree t;
    REQUIRE_NOTHROW(t = parse_html_table(html));
    REQUIRE(tree_size(t) >= 1);
    // Any parsed cell keeps spans >= 1.
    for (const TableNode& section : t.children) {
      for (const TableNode& row : section.children) {
        for (const TableNode& cell : row.children) {
          CHECK(cell.colspan >= 1);
          CHECK(cell.rowspan >= 1);
        }
      }
    }
  }
}

TEST_CASE("th maps to Td and thead is preserved") {
  TableTree t = parse_html_table(
      "<table><thead><tr><th>h</th></tr></thead><tbody><tr><td>b</td></tr></tbody></table>");
  REQUIRE(t.children.size() == 2);
  CHECK(t.children[0].tag == TableTag::Thead);
  CHECK(t.children[0].children[0].children[0].tag == TableTag::Td);
  CHECK(t.children[0].children[0].children[0].text == "h");
  CHECK(t.children[1].tag == TableTag::Tbody);
}

TEST_CASE("entities decode and whitespace collapses") {
  TableTree t = parse_html_table(
      "<table><tr><td>  a &amp;\n b&lt;c &#65; &#x42; &nbsp; d</td></tr></table>");
  CHECK(t.children[0].children[0].children[0].text == "a & b<c A B d");
}

TEST_CASE("inline markup inside a cell is stripped to text") {
  TableTree t =
      parse_html_table("<table><tr><td><b>bold</b> and <i>italic</i><br>next</td></tr></table>");
  CHECK(t.children[0].children[0].children[0].text == "bold and italic next");
}

TEST_CASE("unclosed sloppy tags still build rows") {
  TableTree t = parse_html_table("<table><tr><td>a<td>b<tr><td>c</table>");
  REQUIRE(t.children.size() == 1);
  REQUIRE(t.children[0].children.size() == 2);
  CHECK(t.children[0].children[0].children.size() == 2);
  CHECK(t.children[0].children[0].children[0].text == "a");
  CHECK(t.children[0].children[0].children[1].text == "b");
  CHECK(t.children[0].children[1].children[0].text == "c");
}

TEST_CASE("empty table yields a bare Table node") {
  TableTree t = parse_html_table("<table></table>");
  CHECK(t.tag == TableTag::Table);
  CHECK(t.children.empty());
  CHECK(tree_size(t) == 1);
}

TEST_CASE("no table element raises NoTableFound") {
  CHECK_THROWS_AS(parse_html_table("plain text"), NoTableFoundError);
  CHECK_THROWS_AS(parse_html_table("<div>nope</div>"), NoTableFoundError);
  CHECK_THROWS_AS(parse_html_table(""), NoTableFoundError);
}

TEST_CASE("text outside cells is discarded") {
  TableTree t = parse_html_table(
      "<table><caption>Title</caption><tr>stray<td>a</td>more</tr>junk</table>");
  REQUIRE(t.children.size() == 1);
  CHECK(t.children[0].children[0].children[0].text == "a");
  CHECK(t.children[0].children[0].children.size() == 1);
}

TEST_CASE("case-insensitive structural tags") {
  TableTree t = parse_html_table("<TABLE><TR><TD>a</TD></TR></TABLE>");
  CHECK(tree_size(t) == 4);
}

TEST_CASE("content after the closing table tag is ignored") {
  TableTree t = parse_html_table("<table><tr><td>a</td></tr></table><p>after</p>");
  CHECK(tree_size(t) == 4);
}

TEST_CASE("comments are skipped") {
  TableTree t = parse_html_table("<!-- lead --><table><tr><td>a<!-- x -->b</td></tr></table>");
  CHECK(t.children[0].children[0].children[0].text == "ab");
}
