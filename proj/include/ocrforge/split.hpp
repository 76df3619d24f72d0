#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ocrforge/errors.hpp"
#include "ocrforge/jsonl.hpp"
#include "ocrforge/text_metrics.hpp"
#include "ocrforge/unicode.hpp"
#include "ocrforge/version.hpp"

namespace ocrforge {

struct SimilarityEdge {
  std::string a;
  std::string b;
  double similarity;
};

// Thresholded title-similarity graph: an edge exists exactly when
// 1 - NED(title_a, title_b) >= threshold. Undirected, no self-loops.
struct SimilarityGraph {
  std::vector<std::string> nodes;  // sorted ids
  std::vector<SimilarityEdge> edges;
  double threshold = 0.7;
};

inline double title_similarity(std::string_view a, std::string_view b) {
  return 1.0 - ned(a, b).value;
}

inline SimilarityGraph build_similarity_graph(const std::map<std::string, std::string>& titles,
                                              double threshold) {
  if (!(threshold > 0.0) || threshold > 1.0) {
    throw ConfigError("threshold: expected a value in (0, 1]");
  }
  SimilarityGraph graph;
  graph.threshold = threshold;
  graph.nodes.reserve(titles.size());
  for (const auto& [id, _] : titles) graph.nodes.push_back(id);

  std::vector<const std::string*> texts;
  texts.reserve(titles.size());
  for (const auto& [_, text] : titles) texts.push_back(&text);

  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < graph.nodes.size(); ++j) {
      double sim = title_similarity(*texts[i], *texts[j]);
      if (sim >= threshold) graph.edges.push_back({graph.nodes[i], graph.nodes[j], sim});
    }
  }
  return graph;
}

// Connected components of the similarity graph: the strongest isolation
// guarantee, since no path can cross a component boundary. Members sorted;
// components ordered by first member.
inline std::vector<std::vector<std::string>> detect_communities(const SimilarityGraph& g) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i]] = i;

  std::vector<std::size_t> parent(g.nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const SimilarityEdge& e : g.edges) {
    std::size_t ra = find(index.at(e.a));
    std::size_t rb = find(index.at(e.b));
    if (ra != rb) parent[rb] = ra;
  }

  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) groups[find(i)].push_back(g.nodes[i]);
  std::vector<std::vector<std::string>> communities;
  communities.reserve(groups.size());
  for (auto& [_, members] : groups) {
    std::sort(members.begin(), members.end());
    communities.push_back(std::move(members));
  }
  std::sort(communities.begin(), communities.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return communities;
}

// Suffix-lexicon keyword extraction: organization suffixes are stripped from
// the end of a title (longest first, repeatedly), and the remaining
// whitespace-separated head words become keywords.
struct KeywordRule {
  std::vector<std::string> suffixes;     // sorted by length desc
  std::size_t min_keyword_cps = 2;

  static KeywordRule parse(std::string_view text) {
    KeywordRule rule;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      std::string_view line =
          eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      std::string entry = trim(line);
      if (entry.empty() || entry[0] == '#') continue;
      rule.suffixes.push_back(std::move(entry));
    }
    std::sort(rule.suffixes.begin(), rule.suffixes.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() > b.size() : a < b;
    });
    return rule;
  }

  static KeywordRule load_file(const std::string& path) {
    return parse(read_text_file(path));
  }

  std::vector<std::string> extract(std::string_view title) const {
    std::string head = trim(title);
    bool stripped = true;
    while (stripped) {
      stripped = false;
      for (const std::string& suffix : suffixes) {
        if (head.size() >= suffix.size() &&
            head.compare(head.size() - suffix.size(), suffix.size(), suffix) == 0) {
          head = trim(head.substr(0, head.size() - suffix.size()));
          stripped = true;
          break;
        }
      }
    }
    std::vector<std::string> keywords;
    std::u32string cps = decode_utf8(head);
    std::u32string word;
    auto flush = [&]() {
      if (word.size() >= min_keyword_cps) keywords.push_back(encode_utf8(word));
      word.clear();
    };
    for (char32_t cp : cps) {
      if (is_unicode_space(cp)) {
        flush();
      } else {
        word.push_back(cp);
      }
    }
    flush();
    return keywords;
  }
};

struct SplitAssignment {
  std::set<std::string> train;
  std::set<std::string> test;
};

struct SplitOutcome {
  SplitAssignment assignment;
  std::size_t target = 0;       // requested test size (ceiling of fraction*N)
  bool test_undersized = false;  // test ended below target; flagged, not fatal
  std::size_t moved_by_keyword_filter = 0;
};

namespace detail {

// Portable deterministic Fisher-Yates; std::shuffle's draw sequence is
// implementation-defined, which would break cross-platform reproducibility.
template <typename T>
inline void seeded_shuffle(std::vector<T>& items, uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace detail

// Assigns whole communities to the test split, largest first (seeded shuffle
// breaks size ties), never overshooting the target, then applies the keyword
// fine filter: any test community whose titles contain a keyword extracted
// from any train title moves to train.
//
// Throws InfeasibleSplitError when the test set ends up empty.
inline SplitOutcome assign_split(const std::vector<std::vector<std::string>>& communities,
                                 const std::map<std::string, std::string>& titles,
                                 const KeywordRule& keywords, double test_fraction,
                                 uint64_t seed) {
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
    throw ConfigError("test_fraction: expected a value in (0, 1)");
  }
  std::size_t total = 0;
  for (const auto& c : communities) total += c.size();
  if (total == 0) throw InfeasibleSplitError("no samples to split");

  SplitOutcome outcome;
  outcome.target =
      static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(total) - 1e-9));

  std::vector<std::size_t> order(communities.size());
  std::iota(order.begin(), order.end(), 0);
  detail::seeded_shuffle(order, seed);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return communities[a].size() > communities[b].size();
  });

  std::vector<bool> in_test(communities.size(), false);
  std::size_t test_size = 0;
  for (std::size_t idx : order) {
    if (test_size >= outcome.target) break;
    if (test_size + communities[idx].size() <= outcome.target) {
      in_test[idx] = true;
      test_size += communities[idx].size();
    }
  }

  // Keyword fine filter: repeat until stable, since each move enlarges the
  // train keyword set.
  auto community_keywords = [&](std::size_t idx) {
    std::set<std::string> kws;
    for (const std::string& id : communities[idx]) {
      for (std::string& kw : keywords.extract(titles.at(id))) kws.insert(std::move(kw));
    }
    return kws;
  };
  bool moved = true;
  while (moved) {
    moved = false;
    std::set<std::string> train_keywords;
    for (std::size_t i = 0; i < communities.size(); ++i) {
      if (in_test[i]) continue;
      std::set<std::string> kws = community_keywords(i);
      train_keywords.insert(kws.begin(), kws.end());
    }
    for (std::size_t i = 0; i < communities.size(); ++i) {
      if (!in_test[i]) continue;
      bool leak = false;
      for (const std::string& id : communities[i]) {
        const std::string& title = titles.at(id);
        for (const std::string& kw : train_keywords) {
          if (title.find(kw) != std::string::npos) {
            leak = true;
            break;
          }
        }
        if (leak) break;
      }
      if (leak) {
        in_test[i] = false;
        test_size -= communities[i].size();
        ++outcome.moved_by_keyword_filter;
        moved = true;
      }
    }
  }

  for (std::size_t i = 0; i < communities.size(); ++i) {
    for (const std::string& id : communities[i]) {
      (in_test[i] ? outcome.assignment.test : outcome.assignment.train).insert(id);
    }
  }
  if (outcome.assignment.test.empty()) {
    throw InfeasibleSplitError("keyword fine filter emptied the test set");
  }
  outcome.test_undersized = outcome.assignment.test.size() < outcome.target;
  return outcome;
}

// Post-hoc isolation check: rescans every train x test pair from the raw
// titles instead of trusting the graph.
struct CrossEdgeCheck {
  std::size_t pairs_scanned = 0;
  std::size_t violations = 0;
  bool passed() const { return violations == 0; }
};

inline CrossEdgeCheck verify_isolation(const std::map<std::string, std::string>& titles,
                                       const SplitAssignment& assignment, double threshold) {
  CrossEdgeCheck check;
  for (const std::string& train_id : assignment.train) {
    for (const std::string& test_id : assignment.test) {
      ++check.pairs_scanned;
      if (title_similarity(titles.at(train_id), titles.at(test_id)) >= threshold) {
        ++check.violations;
      }
    }
  }
  return check;
}

// Split report: configuration, community shape, and the cross-edge scan.
inline Json split_report_json(const SimilarityGraph& graph,
                              const std::vector<std::vector<std::string>>& communities,
                              const SplitOutcome& outcome, const CrossEdgeCheck& check,
                              uint64_t seed, double test_fraction) {
  std::map<std::size_t, std::size_t> size_hist;
  for (const auto& c : communities) ++size_hist[c.size()];
  Json hist = Json::object();
  for (const auto& [size, count] : size_hist) hist[std::to_string(size)] = count;
  return Json{{"version", kVersion},
              {"config",
               Json{{"threshold", graph.threshold},
                    {"test_fraction", test_fraction},
                    {"seed", seed}}},
              {"counts",
               Json{{"samples", graph.nodes.size()},
                    {"communities", communities.size()},
                    {"edges", graph.edges.size()},
                    {"train", outcome.assignment.train.size()},
                    {"test", outcome.assignment.test.size()},
                    {"test_target", outcome.target},
                    {"moved_by_keyword_filter", outcome.moved_by_keyword_filter}}},
              {"community_size_histogram", hist},
              {"test_undersized", outcome.test_undersized},
              {"cross_edge_check",
               Json{{"pairs_scanned", check.pairs_scanned},
                    {"violations", check.violations},
                    {"passed", check.passed()}}}};
}

}  // namespace ocrforge
