#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ocrforge/teds.hpp"
#include "oracles.hpp"

using namespace ocrforge;

namespace {

TableNode td(const char* text, int colspan = 1, int rowspan = 1) {
  TableNode n;
  n.tag = TableTag::Td;
  n.text = text;
  n.colspan = colspan;
  n.rowspan = rowspan;
  return n;
}

TableNode wrap(TableTag tag, std::vector<TableNode> children) {
  TableNode n;
  n.tag = tag;
  n.children = std::move(children);
  return n;
}

}  // namespace

TEST_CASE("identical trees have zero distance") {
  TableNode t = wrap(TableTag::Table, {wrap(TableTag::Tbody, {wrap(TableTag::Tr, {td("a")})})});
  CHECK(tree_edit_distance(t, t) == 0.0);
}

TEST_CASE("single node versus empty tree costs one deletion") {
  TableNode single = td("x");
  CHECK(tree_edit_distance(&single, nullptr) == 1.0);
  CHECK(tree_edit_distance(nullptr, &single) == 1.0);
  CHECK(tree_edit_distance(nullptr, nullptr) == 0.0);
}

TEST_CASE("td relabel cost uses normalized edit distance on text") {
  TableNode a = td("ab");
  TableNode b = td("ad");
  // One substitution over length two.
  CHECK(tree_edit_distance(a, b) == Catch::Approx(0.5).margin(1e-12));
  TableNode c = td("ab", 2);
  // Span mismatch is a full relabel.
  CHECK(tree_edit_distance(a, c) == 1.0);
}

TEST_CASE("dp distance equals brute-force mapping oracle on small trees") {
  std::mt19937_64 rng(424242);
  for (int i = 0; i < 200; ++i) {
    TableNode a = oracle::random_tree(rng, 6);
    TableNode b = oracle::random_tree(rng, 6);
    double dp = tree_edit_distance(a, b);
    double brute = oracle::ted_bruteforce(&a, &b);
    CHECK(dp == Catch::Approx(brute).margin(1e-9));
  }
}

TEST_CASE("distance is symmetric") {
  std::mt19937_64 rng(7777);
  for (int i = 0; i < 100; ++i) {
    TableNode a = oracle::random_tree(rng, 8);
    TableNode b = oracle::random_tree(rng, 8);
    CHECK(tree_edit_distance(a, b) == Catch::Approx(tree_edit_distance(b, a)).margin(1e-12));
  }
}

TEST_CASE("triangle inequality on generated triples") {
  std::mt19937_64 rng(31415);
  for (int i = 0; i < 60; ++i) {
    TableNode a = oracle::random_tree(rng, 6);
    TableNode b = oracle::random_tree(rng, 6);
    TableNode c = oracle::random_tree(rng, 6);
    double ab = tree_edit_distance(a, b);
    double bc = tree_edit_distance(b, c);
    double ac = tree_edit_distance(a, c);
    CHECK(ac <= ab + bc + 1e-9);
  }
}

TEST_CASE("teds fixture: one-cell versus two-cell table") {
  // gt has 5 nodes (Table, Tbody, Tr, Td, Td); one insertion is needed.
  TedsScore s = teds("<table><tr><td>a</td></tr></table>",
                     "<table><tr><td>a</td><td>b</td></tr></table>");
  CHECK(s.tree_size_pred == 4);
  CHECK(s.tree_size_gt == 5);
  CHECK(s.edit_distance == 1.0);
  CHECK(s.value == 0.8);
}

TEST_CASE("identical tables score exactly one") {
  const char* html = "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>";
  CHECK(teds(html, html).value == 1.0);
  CHECK(steds(html, html).value == 1.0);
}

TEST_CASE("unparseable prediction scores zero") {
  TedsScore s = teds("no table here", "<table><tr><td>a</td></tr></table>");
  CHECK(s.value == 0.0);
  CHECK(s.tree_size_pred == 0);
  CHECK(s.tree_size_gt == 4);
}

TEST_CASE("unparseable ground truth is a hard error") {
  CHECK_THROWS_AS(teds("<table></table>", "not a table"), NoTableFoundError);
  CHECK_THROWS_AS(steds("<table></table>", "not a table"), NoTableFoundError);
}

TEST_CASE("steds equals teds on text-stripped trees") {
  const char* pred = "<table><tr><td>WRONG</td></tr></table>";
  const char* gt = "<table><tr><td>right</td></tr><tr><td>x</td></tr></table>";
  TedsScore structure = steds(pred, gt);
  // Strip texts by hand and compare via teds on the stripped HTML.
  TedsScore manual = teds("<table><tr><td></td></tr></table>",
                          "<table><tr><td></td></tr><tr><td></td></tr></table>");
  CHECK(structure.value == Catch::Approx(manual.value).margin(1e-12));
}

TEST_CASE("tables equal up to cell text have steds one") {
  CHECK(steds("<table><tr><td>x</td><td>y</td></tr></table>",
              "<table><tr><td>a</td><td>b</td></tr></table>")
            .value == 1.0);
}

TEST_CASE("steds never falls below teds") {
  std::mt19937_64 rng(2718);
  const char* cells[] = {"a", "b", "longer text", ""};
  for (int i = 0; i < 80; ++i) {
    auto make_html = [&]() {
      std::string html = "<table>";
      std::size_t rows = 1 + rng() % 3;
      for (std::size_t r = 0; r < rows; ++r) {
        html += "<tr>";
        std::size_t cols = 1 + rng() % 3;
        for (std::size_t c = 0; c < cols; ++c) {
          html += "<td";
          if (rng() % 4 == 0) html += " colspan=\"2\"";
          html += ">";
          html += cells[rng() % 4];
          html += "</td>";
        }
        html += "</tr>";
      }
      html += "</table>";
      return html;
    };
    std::string pred = make_html();
    std::string gt = make_html();
    CHECK(steds(pred, gt).value >= teds(pred, gt).value - 1e-12);
  }
}

TEST_CASE("teds value stays within bounds and satisfies its formula") {
  std::mt19937_64 rng(161803);
  for (int i = 0; i < 50; ++i) {
    std::string pred = "<table><tr><td>" + std::to_string(rng() % 100) + "</td></tr></table>";
    std::string gt = "<table><tr><td>a</td><td>b</td></tr></table>";
    TedsScore s = teds(pred, gt);
    CHECK(s.value >= 0.0);
    CHECK(s.value <= 1.0);
    double m = static_cast<double>(std::max(s.tree_size_pred, s.tree_size_gt));
    CHECK(s.value == Catch::Approx(1.0 - s.edit_distance / m).margin(1e-12));
    CHECK(teds(gt, gt).value == 1.0);
  }
}
