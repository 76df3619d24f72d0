#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "ocrforge/reward.hpp"
#include "oracles.hpp"

using namespace ocrforge;

namespace {

std::string rollout_with_answer(const std::string& answer) {
  ReasoningChain c{"own view", {"tool says"}, "after checking", answer};
  return render_chain(c);
}

}  // namespace

TEST_CASE("seal accuracy is exact match") {
  CHECK(accuracy_reward(TaskKind::Seal, "gt text", "gt text") == 1.0);
  CHECK(accuracy_reward(TaskKind::Seal, "other", "gt text") == 0.0);
  CHECK(accuracy_reward(TaskKind::Seal, " gt text ", "gt text") == 1.0);
}

TEST_CASE("table accuracy is the teds value and total over garbage") {
  const char* gt = "<table><tr><td>a</td><td>b</td></tr></table>";
  CHECK(accuracy_reward(TaskKind::Table, gt, gt) == 1.0);
  CHECK(accuracy_reward(TaskKind::Table, "<table><tr><td>a</td></tr></table>", gt) == 0.8);
  CHECK(accuracy_reward(TaskKind::Table, "no table", gt) == 0.0);
  // Even an unparseable ground truth must not throw in the reward path.
  CHECK(accuracy_reward(TaskKind::Table, gt, "garbage") == 0.0);
}

TEST_CASE("formula accuracy earns the exact-match bonus") {
  CHECK(accuracy_reward(TaskKind::Formula, "x^{2}", "x^2") == 1.5);
  CHECK(accuracy_reward(TaskKind::Formula, "x+y", "x-y") == Catch::Approx(2.0 * 2 / 6));
  CHECK(accuracy_reward(TaskKind::Formula, "", "x") == 0.0);
}

TEST_CASE("formula reward is never strictly between 1.0 and 1.5") {
  std::mt19937_64 rng(99);
  const char* pieces[] = {"x", "y", "+", "-", "^", "2", "\\frac", "{", "}"};
  for (int i = 0; i < 500; ++i) {
    std::string p;
    std::string g;
    for (std::size_t k = 0, n = rng() % 8; k < n; ++k) p += pieces[rng() % std::size(pieces)];
    for (std::size_t k = 0, n = rng() % 8; k < n; ++k) g += pieces[rng() % std::size(pieces)];
    double r = accuracy_reward(TaskKind::Formula, p, g);
    CHECK((r <= 1.0 || r == 1.5));
  }
}

TEST_CASE("score_rollout composes format and accuracy") {
  std::string good = rollout_with_answer("the title");
  RewardScore s = score_rollout(TaskKind::Seal, good, "the title");
  CHECK(s.format_reward == 1.0);
  CHECK(s.accuracy_reward == 1.0);
  CHECK(s.total == 2.0);

  s = score_rollout(TaskKind::Seal, "the title", "the title");  // no tags at all
  CHECK(s.format_reward == 0.0);
  CHECK(s.accuracy_reward == 0.0);
  CHECK(s.total == 0.0);

  s = score_rollout(TaskKind::Seal, rollout_with_answer("wrong"), "the title");
  CHECK(s.format_reward == 1.0);
  CHECK(s.accuracy_reward == 0.0);
  CHECK(s.total == 1.0);
}

TEST_CASE("perfect formula rollout totals 2.5") {
  RewardScore s = score_rollout(TaskKind::Formula, rollout_with_answer("x^{2}+1"), "x^2+1");
  CHECK(s.format_reward == 1.0);
  CHECK(s.accuracy_reward == 1.5);
  CHECK(s.total == 2.5);
}

TEST_CASE("answer is extracted even from format-invalid rollouts") {
  std::string malformed = "preamble <answer>the title</answer>";
  RewardScore s = score_rollout(TaskKind::Seal, malformed, "the title");
  CHECK(s.format_reward == 0.0);
  CHECK(s.accuracy_reward == 1.0);
  CHECK(s.total == 1.0);

  ScoreOptions strict;
  strict.strict_format_gate = true;
  s = score_rollout(TaskKind::Seal, malformed, "the title", strict);
  CHECK(s.accuracy_reward == 0.0);
  CHECK(s.total == 0.0);
}

TEST_CASE("accuracy ignores text outside the answer section") {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 100; ++i) {
    ReasoningChain a = oracle::random_chain(rng);
    ReasoningChain b = a;
    b.think += " extra";
    b.rethink = "completely different";
    RewardScore sa = score_rollout(TaskKind::Seal, render_chain(a), "target");
    RewardScore sb = score_rollout(TaskKind::Seal, render_chain(b), "target");
    CHECK(sa.accuracy_reward == sb.accuracy_reward);
  }
}

TEST_CASE("score_batch preserves order and is deterministic") {
  std::vector<std::pair<std::string, std::string>> batch;
  for (int i = 0; i < 8; ++i) batch.emplace_back(rollout_with_answer("t"), "t");
  std::vector<RewardScore> scores = score_batch(TaskKind::Seal, batch);
  REQUIRE(scores.size() == 8);
  for (const RewardScore& s : scores) {
    CHECK(s.total == 2.0);
  }

  CHECK(score_batch(TaskKind::Seal, {}).empty());

  // Shuffled input gives correspondingly shuffled output.
  std::vector<std::pair<std::string, std::string>> mixed = {
      {rollout_with_answer("a"), "a"},
      {rollout_with_answer("b"), "not b"},
      {"garbage", "a"},
  };
  std::vector<RewardScore> base = score_batch(TaskKind::Seal, mixed);
  std::vector<std::pair<std::string, std::string>> shuffled = {mixed[2], mixed[0], mixed[1]};
  std::vector<RewardScore> out = score_batch(TaskKind::Seal, shuffled);
  CHECK(out[0].total == base[2].total);
  CHECK(out[1].total == base[0].total);
  CHECK(out[2].total == base[1].total);

  // Bit-identical across repeated runs.
  std::vector<RewardScore> again = score_batch(TaskKind::Seal, mixed);
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    CHECK(again[i].total == base[i].total);
    CHECK(again[i].format_reward == base[i].format_reward);
    CHECK(again[i].accuracy_reward == base[i].accuracy_reward);
  }
}

TEST_CASE("total always equals format plus accuracy") {
  std::mt19937_64 rng(555);
  for (int i = 0; i < 200; ++i) {
    std::string raw = i % 3 == 0 ? "junk <answer>x</answer>" : render_chain(oracle::random_chain(rng));
    RewardScore s = score_rollout(TaskKind::Seal, raw, "x");
    CHECK(s.total == s.format_reward + s.accuracy_reward);
  }
}
