#pragma once

#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ocrforge/formula_metrics.hpp"
#include "ocrforge/jsonl.hpp"
#include "ocrforge/task.hpp"
#include "ocrforge/teds.hpp"
#include "ocrforge/text_metrics.hpp"
#include "ocrforge/version.hpp"

namespace ocrforge {

// Per-task aggregate metrics plus the per-item values they average.
//   Seal:    ACC
//   Table:   TEDS, STEDS, NED (NED over the raw HTML strings)
//   Formula: CDM_proxy, ExpRate, NED
struct EvalReport {
  TaskKind task = TaskKind::Seal;
  std::size_t n = 0;
  std::vector<std::string> metric_names;
  std::vector<std::pair<std::string, std::vector<double>>> per_item;  // id -> values
  std::vector<double> aggregates;

  Json to_json(const Json& resolved_config) const {
    Json metrics = Json::object();
    for (std::size_t k = 0; k < metric_names.size(); ++k) metrics[metric_names[k]] = aggregates[k];
    Json items = Json::array();
    for (const auto& [id, values] : per_item) {
      Json item{{"id", id}};
      for (std::size_t k = 0; k < metric_names.size(); ++k) item[metric_names[k]] = values[k];
      items.push_back(std::move(item));
    }
    return Json{{"version", kVersion},
                {"config", resolved_config},
                {"task", to_string(task)},
                {"n", n},
                {"metrics", metrics},
                {"per_item", items}};
  }

  std::string to_table() const {
    std::ostringstream out;
    out << "task: " << to_string(task) << "  n: " << n << "\n";
    for (std::size_t k = 0; k < metric_names.size(); ++k) {
      out << "  " << std::left << std::setw(10) << metric_names[k] << std::right << std::fixed
          << std::setprecision(6) << aggregates[k] << "\n";
    }
    return out.str();
  }
};

namespace detail {

inline std::vector<double> eval_item(TaskKind task, const std::string& pred,
                                     const std::string& gt, const RewriteTable& rewrites) {
  switch (task) {
    case TaskKind::Seal:
      return {exact_match(pred, gt)};
    case TaskKind::Table: {
      double t;
      double s;
      try {
        t = teds(pred, gt).value;
        s = steds(pred, gt).value;
      } catch (const NoTableFoundError&) {
        throw Error("reference has no <table> element");
      }
      return {t, s, ned(pred, gt).value};
    }
    case TaskKind::Formula: {
      double cdm = cdm_proxy(pred, gt, rewrites).value;
      return {cdm, cdm == 1.0 ? 1.0 : 0.0, ned(pred, gt).value};
    }
  }
  return {};
}

}  // namespace detail

inline std::vector<std::string> metric_names_for(TaskKind task) {
  switch (task) {
    case TaskKind::Seal: return {"ACC"};
    case TaskKind::Table: return {"TEDS", "STEDS", "NED"};
    case TaskKind::Formula: return {"CDM_proxy", "ExpRate", "NED"};
  }
  return {};
}

// Scores predictions against references. Aggregates are arithmetic means of
// the per-item values, summed in input order.
//
// Throws MissingReferenceError listing every prediction id absent from the
// references, EmptyBatchError for an empty prediction set.
inline EvalReport evaluate(TaskKind task,
                           const std::vector<std::pair<std::string, std::string>>& predictions,
                           const std::map<std::string, std::string>& references,
                           const RewriteTable& rewrites = RewriteTable::builtin()) {
  if (predictions.empty()) throw EmptyBatchError("no predictions to evaluate");
  std::vector<std::string> missing;
  for (const auto& [id, _] : predictions) {
    if (references.find(id) == references.end()) missing.push_back(id);
  }
  if (!missing.empty()) {
    std::string msg = "predictions without references:";
    for (const std::string& id : missing) msg += " " + id;
    throw MissingReferenceError(msg, std::move(missing));
  }

  EvalReport report;
  report.task = task;
  report.metric_names = metric_names_for(task);
  report.aggregates.assign(report.metric_names.size(), 0.0);
  for (const auto& [id, pred] : predictions) {
    std::vector<double> values = detail::eval_item(task, pred, references.at(id), rewrites);
    for (std::size_t k = 0; k < values.size(); ++k) report.aggregates[k] += values[k];
    report.per_item.emplace_back(id, std::move(values));
  }
  report.n = report.per_item.size();
  for (double& v : report.aggregates) v /= static_cast<double>(report.n);
  return report;
}

// JSONL loading for the eval command. Predictions: {"id", "prediction"};
// references: {"id", "answer"} (a SampleRecord file with "answer_gt" is also
// accepted). Duplicate ids are malformed input.
inline std::vector<std::pair<std::string, std::string>> load_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open predictions file: " + path);
  std::vector<std::pair<std::string, std::string>> predictions;
  std::set<std::string> seen;
  for_each_jsonl(in, [&](Json j, std::size_t line_no) {
    if (!j.contains("id") || !j["id"].is_string() || !j.contains("prediction") ||
        !j["prediction"].is_string()) {
      throw MalformedLineError(
          "line " + std::to_string(line_no) + ": expected {\"id\", \"prediction\"}", line_no);
    }
    std::string id = j["id"].get<std::string>();
    if (!seen.insert(id).second) {
      throw MalformedLineError("line " + std::to_string(line_no) + ": duplicate id '" + id + "'",
                               line_no);
    }
    predictions.emplace_back(std::move(id), j["prediction"].get<std::string>());
  });
  return predictions;
}

inline std::map<std::string, std::string> load_references(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open references file: " + path);
  std::map<std::string, std::string> references;
  for_each_jsonl(in, [&](Json j, std::size_t line_no) {
    if (!j.contains("id") || !j["id"].is_string()) {
      throw MalformedLineError("line " + std::to_string(line_no) + ": missing string field 'id'",
                               line_no);
    }
    const char* field = j.contains("answer") ? "answer" : "answer_gt";
    if (!j.contains(field) || !j[field].is_string()) {
      throw MalformedLineError(
          "line " + std::to_string(line_no) + ": expected field 'answer' (or 'answer_gt')",
          line_no);
    }
    std::string id = j["id"].get<std::string>();
    if (!references.emplace(id, j[field].get<std::string>()).second) {
      throw MalformedLineError("line " + std::to_string(line_no) + ": duplicate id '" + id + "'",
                               line_no);
    }
  });
  return references;
}

}  // namespace ocrforge
