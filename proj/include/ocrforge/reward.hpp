#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ocrforge/chain.hpp"
#include "ocrforge/formula_metrics.hpp"
#include "ocrforge/task.hpp"
#include "ocrforge/teds.hpp"
#include "ocrforge/text_metrics.hpp"

namespace ocrforge {

// Composite reward for one rollout: the binary format reward plus the
// task-specific accuracy reward. Accuracy lies in [0,1] for seal and table
// and [0,1.5] for formula (exact proxy matches earn a 0.5 bonus).
struct RewardScore {
  TaskKind task = TaskKind::Seal;
  double format_reward = 0.0;
  double accuracy_reward = 0.0;
  double total = 0.0;
};

struct ScoreOptions {
  // When set, a rollout that fails the format check scores accuracy 0.0 even
  // if an <answer> section is extractable.
  bool strict_format_gate = false;
  const RewriteTable* rewrite_table = nullptr;  // null -> builtin

  const RewriteTable& rewrites() const {
    return rewrite_table != nullptr ? *rewrite_table : RewriteTable::builtin();
  }
};

// First <answer>...</answer> body, independent of overall chain validity.
inline std::optional<std::string> extract_answer(std::string_view raw) {
  constexpr std::string_view kOpen = "<answer>";
  constexpr std::string_view kClose = "</answer>";
  std::size_t open = raw.find(kOpen);
  if (open == std::string_view::npos) return std::nullopt;
  std::size_t body = open + kOpen.size();
  std::size_t close = raw.find(kClose, body);
  if (close == std::string_view::npos) return std::nullopt;
  return std::string(raw.substr(body, close - body));
}

// Task-specific accuracy reward. Total over arbitrary input: metric parse
// failures score 0.0 rather than raising.
inline double accuracy_reward(TaskKind task, std::string_view rollout_answer, std::string_view gt,
                              const ScoreOptions& options = {}) {
  switch (task) {
    case TaskKind::Seal:
      return exact_match(rollout_answer, gt);
    case TaskKind::Table:
      try {
        return teds(rollout_answer, gt).value;
      } catch (const Error&) {
        return 0.0;
      }
    case TaskKind::Formula: {
      double value = cdm_proxy(rollout_answer, gt, options.rewrites()).value;
      return value == 1.0 ? value + 0.5 : value;
    }
  }
  return 0.0;
}

inline RewardScore score_rollout(TaskKind task, std::string_view raw_rollout, std::string_view gt,
                                 const ScoreOptions& options = {}) {
  RewardScore score;
  score.task = task;
  score.format_reward = format_reward(raw_rollout);
  std::optional<std::string> answer = extract_answer(raw_rollout);
  bool gated = options.strict_format_gate && score.format_reward == 0.0;
  if (answer && !gated) {
    score.accuracy_reward = accuracy_reward(task, *answer, gt, options);
  }
  score.total = score.format_reward + score.accuracy_reward;
  return score;
}

// Element-wise scoring of (rollout, ground truth) pairs; output order matches
// input order and results are bit-identical across runs.
inline std::vector<RewardScore> score_batch(
    TaskKind task, const std::vector<std::pair<std::string, std::string>>& rollouts,
    const ScoreOptions& options = {}) {
  std::vector<RewardScore> scores;
  scores.reserve(rollouts.size());
  for (const auto& [raw, gt] : rollouts) scores.push_back(score_rollout(task, raw, gt, options));
  return scores;
}

}  // namespace ocrforge
