#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "ocrforge/table_tree.hpp"
#include "ocrforge/text_metrics.hpp"

namespace ocrforge {

// Symmetric cost model for ordered-tree edit distance. The default relabel
// matches the table-similarity convention: unit cost across different tags,
// unit cost for Td cells whose spans differ, otherwise the normalized
// character edit distance between the cell texts.
struct CostModel {
  double insert_cost = 1.0;
  double delete_cost = 1.0;
  std::function<double(const TableNode&, const TableNode&)> relabel =
      [](const TableNode& a, const TableNode& b) {
        if (a.tag != b.tag) return 1.0;
        if (a.tag == TableTag::Td) {
          if (a.colspan != b.colspan || a.rowspan != b.rowspan) return 1.0;
          return ned(a.text, b.text).value;
        }
        return 0.0;
      };
};

namespace detail {

// Postorder flattening with leftmost-leaf-descendant indices and keyroots,
// the decomposition the Zhang-Shasha recurrence runs on.
struct FlatTree {
  std::vector<const TableNode*> post;
  std::vector<int> lld;
  std::vector<int> keyroots;
};

inline void flatten_postorder(const TableNode& node, FlatTree& out, int& lld_of_self) {
  int first_leaf = -1;
  for (const TableNode& child : node.children) {
    int child_lld = -1;
    flatten_postorder(child, out, child_lld);
    if (first_leaf < 0) first_leaf = child_lld;
  }
  int index = static_cast<int>(out.post.size());
  out.post.push_back(&node);
  lld_of_self = node.children.empty() ? index : first_leaf;
  out.lld.push_back(lld_of_self);
}

inline FlatTree flatten(const TableNode* root) {
  FlatTree flat;
  if (root == nullptr) return flat;
  int unused = -1;
  flatten_postorder(*root, flat, unused);
  // Keyroots: for each distinct leftmost leaf, the highest node above it.
  std::vector<int> last_for_lld(flat.post.size(), -1);
  for (int i = 0; i < static_cast<int>(flat.post.size()); ++i) last_for_lld[flat.lld[i]] = i;
  for (int i : last_for_lld) {
    if (i >= 0) flat.keyroots.push_back(i);
  }
  std::sort(flat.keyroots.begin(), flat.keyroots.end());
  return flat;
}

}  // namespace detail

// Minimum-cost node insert/delete/relabel sequence transforming `a` into `b`
// under the ordered-tree edit model (Zhang-Shasha keyroot DP). A null pointer
// denotes the empty tree.
inline double tree_edit_distance(const TableNode* a, const TableNode* b,
                                 const CostModel& cost = CostModel{}) {
  detail::FlatTree fa = detail::flatten(a);
  detail::FlatTree fb = detail::flatten(b);
  const int n = static_cast<int>(fa.post.size());
  const int m = static_cast<int>(fb.post.size());
  if (n == 0) return m * cost.insert_cost;
  if (m == 0) return n * cost.delete_cost;

  std::vector<std::vector<double>> treedist(n, std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> fd(n + 1, std::vector<double>(m + 1, 0.0));

  for (int ki : fa.keyroots) {
    for (int kj : fb.keyroots) {
      const int li = fa.lld[ki];
      const int lj = fb.lld[kj];
      fd[0][0] = 0.0;
      for (int di = li; di <= ki; ++di) fd[di - li + 1][0] = fd[di - li][0] + cost.delete_cost;
      for (int dj = lj; dj <= kj; ++dj) fd[0][dj - lj + 1] = fd[0][dj - lj] + cost.insert_cost;
      for (int di = li; di <= ki; ++di) {
        for (int dj = lj; dj <= kj; ++dj) {
          const int fi = di - li + 1;
          const int fj = dj - lj + 1;
          if (fa.lld[di] == li && fb.lld[dj] == lj) {
            double rel = cost.relabel(*fa.post[di], *fb.post[dj]);
            fd[fi][fj] = std::min({fd[fi - 1][fj] + cost.delete_cost,
                                   fd[fi][fj - 1] + cost.insert_cost, fd[fi - 1][fj - 1] + rel});
            treedist[di][dj] = fd[fi][fj];
          } else {
            fd[fi][fj] = std::min({fd[fi - 1][fj] + cost.delete_cost,
                                   fd[fi][fj - 1] + cost.insert_cost,
                                   fd[fa.lld[di] - li][fb.lld[dj] - lj] + treedist[di][dj]});
          }
        }
      }
    }
  }
  return treedist[n - 1][m - 1];
}

inline double tree_edit_distance(const TableNode& a, const TableNode& b,
                                 const CostModel& cost = CostModel{}) {
  return tree_edit_distance(&a, &b, cost);
}

// Tree-edit-distance-based similarity between two parsed tables.
struct TedsScore {
  double value = 0.0;
  std::size_t tree_size_pred = 0;
  std::size_t tree_size_gt = 0;
  double edit_distance = 0.0;
};

namespace detail {

inline TedsScore teds_on_trees(const TableTree& pred, const TableTree& gt) {
  TedsScore score;
  score.tree_size_pred = tree_size(pred);
  score.tree_size_gt = tree_size(gt);
  score.edit_distance = tree_edit_distance(pred, gt);
  double denom = static_cast<double>(std::max(score.tree_size_pred, score.tree_size_gt));
  score.value = (denom - score.edit_distance) / denom;
  return score;
}

inline void strip_cell_text(TableNode& node) {
  node.text.clear();
  for (TableNode& c : node.children) strip_cell_text(c);
}

}  // namespace detail

// TEDS = 1 - TED / max(|T_pred|, |T_gt|). A prediction with no parseable
// table scores 0.0; an unparseable ground truth is a hard error.
inline TedsScore teds(std::string_view pred_html, std::string_view gt_html) {
  TableTree gt = parse_html_table(gt_html);
  TedsScore score;
  score.tree_size_gt = tree_size(gt);
  try {
    TableTree pred = parse_html_table(pred_html);
    return detail::teds_on_trees(pred, gt);
  } catch (const NoTableFoundError&) {
    score.tree_size_pred = 0;
    score.edit_distance = static_cast<double>(score.tree_size_gt);
    score.value = 0.0;
    return score;
  }
}

// Structure-only TEDS: cell texts are erased on both sides before the
// distance is computed; colspan/rowspan still participate.
inline TedsScore steds(std::string_view pred_html, std::string_view gt_html) {
  TableTree gt = parse_html_table(gt_html);
  detail::strip_cell_text(gt);
  TedsScore score;
  score.tree_size_gt = tree_size(gt);
  try {
    TableTree pred = parse_html_table(pred_html);
    detail::strip_cell_text(pred);
    return detail::teds_on_trees(pred, gt);
  } catch (const NoTableFoundError&) {
    score.tree_size_pred = 0;
    score.edit_distance = static_cast<double>(score.tree_size_gt);
    score.value = 0.0;
    return score;
  }
}

}  // namespace ocrforge
