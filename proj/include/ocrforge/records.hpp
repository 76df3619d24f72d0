#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ocrforge/chain.hpp"
#include "ocrforge/jsonl.hpp"
#include "ocrforge/task.hpp"

namespace ocrforge {

// One source triple: an image locator, the recognition instruction, and the
// ground-truth content.
struct SampleRecord {
  std::string id;
  TaskKind task = TaskKind::Seal;
  std::string image_ref;
  std::string question;
  std::string answer_gt;
};

inline Json to_json(const SampleRecord& s) {
  return Json{{"id", s.id},
              {"task", to_string(s.task)},
              {"image_ref", s.image_ref},
              {"question", s.question},
              {"answer_gt", s.answer_gt}};
}

namespace detail {

inline std::string require_string(const Json& j, const char* field, std::size_t line_no) {
  if (!j.contains(field) || !j[field].is_string()) {
    throw MalformedLineError(
        "line " + std::to_string(line_no) + ": missing or non-string field '" + field + "'",
        line_no);
  }
  return j[field].get<std::string>();
}

}  // namespace detail

inline SampleRecord sample_from_json(const Json& j, std::size_t line_no = 0) {
  SampleRecord s;
  s.id = detail::require_string(j, "id", line_no);
  s.task = task_from_string(detail::require_string(j, "task", line_no));
  s.image_ref = detail::require_string(j, "image_ref", line_no);
  s.question = detail::require_string(j, "question", line_no);
  s.answer_gt = detail::require_string(j, "answer_gt", line_no);
  if (s.answer_gt.empty()) {
    throw MalformedLineError("line " + std::to_string(line_no) + ": empty answer_gt", line_no);
  }
  return s;
}

// Loads and validates a SampleRecord dataset: per-line schema, non-empty
// ground truth, unique ids.
inline std::vector<SampleRecord> load_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open input dataset: " + path);
  std::vector<SampleRecord> samples;
  std::set<std::string> seen;
  for_each_jsonl(in, [&](Json value, std::size_t line_no) {
    SampleRecord s = sample_from_json(value, line_no);
    if (!seen.insert(s.id).second) {
      throw MalformedLineError("line " + std::to_string(line_no) + ": duplicate id '" + s.id + "'",
                               line_no);
    }
    samples.push_back(std::move(s));
  });
  return samples;
}

// A constructed reasoning sample plus everything the retention gate saw.
struct ReasoningRecord {
  SampleRecord sample;
  std::optional<ReasoningChain> chain;
  double self_score = 0.0;
  std::map<std::string, double> tool_scores;
  std::map<std::string, std::string> tool_outputs;
  double final_score = 0.0;
  bool retained = false;
  std::optional<std::string> reject_reason;
};

inline Json to_json(const ReasoningChain& c) {
  return Json{{"think", c.think},
              {"tool_blocks", c.tool_blocks},
              {"rethink", c.rethink},
              {"answer", c.answer}};
}

inline Json to_json(const ReasoningRecord& r) {
  Json j;
  j["sample"] = to_json(r.sample);
  j["chain"] = r.chain ? to_json(*r.chain) : Json(nullptr);
  j["self_score"] = r.self_score;
  j["tool_scores"] = Json::object();
  for (const auto& [name, score] : r.tool_scores) j["tool_scores"][name] = score;
  j["tool_outputs"] = Json::object();
  for (const auto& [name, text] : r.tool_outputs) j["tool_outputs"][name] = text;
  j["final_score"] = r.final_score;
  j["retained"] = r.retained;
  j["reject_reason"] = r.reject_reason ? Json(*r.reject_reason) : Json(nullptr);
  return j;
}

// Reasoning-dataset emission format: the serialized chain plus the answer.
inline Json to_dataset_json(const ReasoningRecord& r) {
  return Json{{"id", r.sample.id},
              {"task", to_string(r.sample.task)},
              {"image_ref", r.sample.image_ref},
              {"question", r.sample.question},
              {"reasoning", render_chain(*r.chain)},
              {"answer", r.chain->answer}};
}

}  // namespace ocrforge
