#pragma once

// Test-only reference implementations, deliberately naive and kept
// independent of the library's DP code paths.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ocrforge/chain.hpp"
#include "ocrforge/table_tree.hpp"
#include "ocrforge/teds.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Exponential recursive Levenshtein over code points (no memoization).
inline std::size_t lev_recursive(const std::u32string& a, const std::u32string& b, std::size_t i,
                                 std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  std::size_t best = lev_recursive(a, b, i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
  best = std::min(best, lev_recursive(a, b, i + 1, j) + 1);
  best = std::min(best, lev_recursive(a, b, i, j + 1) + 1);
  return best;
}

inline std::size_t lev_recursive(const std::u32string& a, const std::u32string& b) {
  return lev_recursive(a, b, 0, 0);
}

// ---------------------------------------------------------------------------
// Exponential recursive LCS length.
template <typename Seq>
inline std::size_t lcs_recursive(const Seq& a, const Seq& b, std::size_t i, std::size_t j) {
  if (i == a.size() || j == b.size()) return 0;
  if (a[i] == b[j]) return 1 + lcs_recursive(a, b, i + 1, j + 1);
  return std::max(lcs_recursive(a, b, i + 1, j), lcs_recursive(a, b, i, j + 1));
}

template <typename Seq>
inline std::size_t lcs_recursive(const Seq& a, const Seq& b) {
  return lcs_recursive(a, b, 0, 0);
}

// ---------------------------------------------------------------------------
// Brute-force ordered-tree edit distance: enumerate every injective node
// mapping that preserves ancestry and left-to-right order (a Tai mapping) and
// take the cheapest. Exponential; use only on tiny trees.

struct FlatNode {
  const ocrforge::TableNode* node;
  int pre = 0;
  int post = 0;
};

inline void flatten_pre_post(const ocrforge::TableNode& n, std::vector<FlatNode>& out, int& pre,
                             int& post) {
  int my_pre = pre++;
  std::size_t my_index = out.size();
  out.push_back({&n, my_pre, 0});
  for (const ocrforge::TableNode& c : n.children) flatten_pre_post(c, out, pre, post);
  out[my_index].post = post++;
}

inline std::vector<FlatNode> flatten_pre_post(const ocrforge::TableNode* root) {
  std::vector<FlatNode> out;
  if (root == nullptr) return out;
  int pre = 0;
  int post = 0;
  flatten_pre_post(*root, out, pre, post);
  return out;
}

inline bool is_ancestor(const FlatNode& a, const FlatNode& b) {
  return a.pre < b.pre && a.post > b.post;
}

inline bool is_left_of(const FlatNode& a, const FlatNode& b) {
  return a.pre < b.pre && a.post < b.post;
}

// Checks the Tai mapping conditions pairwise.
inline bool mapping_consistent(const std::vector<FlatNode>& a, const std::vector<FlatNode>& b,
                               const std::vector<std::pair<int, int>>& pairs) {
  for (std::size_t x = 0; x < pairs.size(); ++x) {
    for (std::size_t y = x + 1; y < pairs.size(); ++y) {
      const FlatNode& a1 = a[pairs[x].first];
      const FlatNode& a2 = a[pairs[y].first];
      const FlatNode& b1 = b[pairs[x].second];
      const FlatNode& b2 = b[pairs[y].second];
      if (is_ancestor(a1, a2) != is_ancestor(b1, b2)) return false;
      if (is_ancestor(a2, a1) != is_ancestor(b2, b1)) return false;
      if (is_left_of(a1, a2) != is_left_of(b1, b2)) return false;
      if (is_left_of(a2, a1) != is_left_of(b2, b1)) return false;
    }
  }
  return true;
}

inline void enumerate_mappings(const std::vector<FlatNode>& a, const std::vector<FlatNode>& b,
                               std::size_t next_a, std::vector<bool>& used_b,
                               std::vector<std::pair<int, int>>& current,
                               const ocrforge::CostModel& cost, double cost_so_far, double& best) {
  // Unmapped-so-far nodes of `a` will each cost one deletion at the end; a
  // cheap lower bound prunes hopeless branches.
  if (cost_so_far >= best) return;
  if (next_a == a.size()) {
    double total = cost_so_far;
    for (bool used : used_b) {
      if (!used) total += cost.insert_cost;
    }
    best = std::min(best, total);
    return;
  }
  // Option 1: delete a[next_a].
  enumerate_mappings(a, b, next_a + 1, used_b, current, cost, cost_so_far + cost.delete_cost,
                     best);
  // Option 2: map a[next_a] to any unused node of b.
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used_b[j]) continue;
    current.emplace_back(static_cast<int>(next_a), static_cast<int>(j));
    if (mapping_consistent(a, b, current)) {
      used_b[j] = true;
      double rel = cost.relabel(*a[next_a].node, *b[j].node);
      enumerate_mappings(a, b, next_a + 1, used_b, current, cost, cost_so_far + rel, best);
      used_b[j] = false;
    }
    current.pop_back();
  }
}

inline double ted_bruteforce(const ocrforge::TableNode* a, const ocrforge::TableNode* b,
                             const ocrforge::CostModel& cost = ocrforge::CostModel{}) {
  std::vector<FlatNode> fa = flatten_pre_post(a);
  std::vector<FlatNode> fb = flatten_pre_post(b);
  double best = fa.size() * cost.delete_cost + fb.size() * cost.insert_cost + 1.0;
  std::vector<bool> used_b(fb.size(), false);
  std::vector<std::pair<int, int>> current;
  enumerate_mappings(fa, fb, 0, used_b, current, cost, 0.0, best);
  return best;
}

// ---------------------------------------------------------------------------
// Flood-fill connected components over an adjacency list keyed by id.
inline std::vector<std::set<std::string>> components_floodfill(
    const std::set<std::string>& nodes,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<std::string> visited;
  std::vector<std::set<std::string>> components;
  for (const std::string& start : nodes) {
    if (visited.count(start)) continue;
    std::set<std::string> comp;
    std::vector<std::string> stack{start};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      if (!comp.insert(cur).second) continue;
      visited.insert(cur);
      for (const std::string& next : adj[cur]) {
        if (!comp.count(next)) stack.push_back(next);
      }
    }
    components.push_back(std::move(comp));
  }
  return components;
}

// ---------------------------------------------------------------------------
// Generators (fixed-seed std::mt19937_64 for reproducibility).

inline std::u32string random_string(std::mt19937_64& rng, std::size_t max_len,
                                    std::u32string_view alphabet) {
  std::size_t len = rng() % (max_len + 1);
  std::u32string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
  return s;
}

// Random table-shaped tree with at most `max_nodes` nodes.
inline ocrforge::TableNode random_tree(std::mt19937_64& rng, int max_nodes) {
  using ocrforge::TableNode;
  using ocrforge::TableTag;
  static constexpr TableTag kTags[] = {TableTag::Table, TableTag::Thead, TableTag::Tbody,
                                       TableTag::Tr, TableTag::Td};
  static const char* kTexts[] = {"", "a", "b", "ab", "xy"};
  int budget = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_nodes));

  std::function<TableNode(int&)> gen = [&](int& remaining) {
    TableNode node;
    node.tag = kTags[rng() % 5];
    if (node.tag == TableTag::Td) {
      node.text = kTexts[rng() % 5];
      if (rng() % 4 == 0) node.colspan = 1 + static_cast<int>(rng() % 3);
      if (rng() % 4 == 0) node.rowspan = 1 + static_cast<int>(rng() % 3);
    }
    --remaining;
    while (remaining > 0 && rng() % 3 != 0) {
      node.children.push_back(gen(remaining));
    }
    return node;
  };
  return gen(budget);
}

// Random well-formed reasoning chain; bodies avoid the chain tag tokens.
inline ocrforge::ReasoningChain random_chain(std::mt19937_64& rng) {
  static const char* kBodies[] = {
      "", "a", "line one\nline two", "  padded  ", "<td>html</td>", "x < y > z", "答案", "tool: {}",
  };
  auto pick = [&]() { return std::string(kBodies[rng() % 8]); };
  ocrforge::ReasoningChain chain;
  chain.think = pick();
  std::size_t n_tools = 1 + rng() % 3;
  for (std::size_t i = 0; i < n_tools; ++i) chain.tool_blocks.push_back(pick());
  chain.rethink = pick();
  chain.answer = pick();
  return chain;
}

}  // namespace oracle
