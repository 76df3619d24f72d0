#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <thread>

#include <httplib.h>

#include "ocrforge/jsonl.hpp"
#include "ocrforge/reward.hpp"

namespace ocrforge {

inline Json to_json(const RewardScore& score) {
  return Json{{"task", to_string(score.task)},
              {"format_reward", score.format_reward},
              {"accuracy_reward", score.accuracy_reward},
              {"total", score.total}};
}

// Streaming reward scoring: one input line {"rollout", "gt"} becomes one
// output line. A malformed line yields an error object in place, so output
// line counts always match input line counts. This is the single scoring
// path shared by the file command and the serving endpoint.
inline Json process_reward_line(TaskKind task, const std::string& line, std::size_t line_no,
                                const ScoreOptions& options = {}) {
  Json j = Json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return Json{{"error", "invalid JSON"}, {"line", line_no}};
  }
  if (!j.contains("rollout") || !j["rollout"].is_string()) {
    return Json{{"error", "missing string field 'rollout'"}, {"line", line_no}};
  }
  if (!j.contains("gt") || !j["gt"].is_string()) {
    return Json{{"error", "missing string field 'gt'"}, {"line", line_no}};
  }
  return to_json(
      score_rollout(task, j["rollout"].get<std::string>(), j["gt"].get<std::string>(), options));
}

inline void stream_rewards(TaskKind task, std::istream& in, std::ostream& out,
                           const ScoreOptions& options = {}) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out << process_reward_line(task, line, line_no, options).dump() << '\n';
  }
}

// Validates {"task", "items": [{"rollout", "gt"}]} and returns the first
// schema violation as a field path.
inline std::optional<std::string> validate_score_request(const Json& body,
                                                         bool task_required = true) {
  if (!body.is_object()) return "body: expected a JSON object";
  if (body.contains("task")) {
    if (!body["task"].is_string()) return "task: expected string";
    try {
      task_from_string(body["task"].get<std::string>());
    } catch (const ConfigError& e) {
      return std::string("task: ") + e.what();
    }
  } else if (task_required) {
    return "task: required";
  }
  if (!body.contains("items") || !body["items"].is_array()) {
    return "items: required array";
  }
  for (std::size_t i = 0; i < body["items"].size(); ++i) {
    const Json& item = body["items"][i];
    std::string path = "items[" + std::to_string(i) + "]";
    if (!item.is_object()) return path + ": expected object";
    if (!item.contains("rollout") || !item["rollout"].is_string()) {
      return path + ".rollout: expected string";
    }
    if (!item.contains("gt") || !item["gt"].is_string()) return path + ".gt: expected string";
  }
  return std::nullopt;
}

struct ScoreResponse {
  int status = 200;
  Json body;
};

// Scores a validated-or-not request body; callers map status to transport.
inline ScoreResponse handle_score_request(const Json& body,
                                          std::optional<TaskKind> default_task = std::nullopt,
                                          const ScoreOptions& options = {}) {
  if (auto error = validate_score_request(body, !default_task.has_value())) {
    return {400, Json{{"error", *error}}};
  }
  TaskKind task =
      body.contains("task") ? task_from_string(body["task"].get<std::string>()) : *default_task;
  Json scores = Json::array();
  for (const Json& item : body["items"]) {
    scores.push_back(to_json(score_rollout(task, item["rollout"].get<std::string>(),
                                           item["gt"].get<std::string>(), options)));
  }
  return {200, Json{{"scores", scores}}};
}

struct ServeConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::optional<TaskKind> default_task;
  std::size_t payload_cap_bytes = 32ull * 1024 * 1024;
  ScoreOptions score_options;
};

// Synchronous reward endpoint:
//   POST /score    {"task", "items": [{"rollout", "gt"}]} -> {"scores": [...]}
//   GET  /healthz  -> 200 "ok"
// Responses are deterministic and order-preserving; requests over the payload
// cap get 413.
class RewardServer {
 public:
  explicit RewardServer(ServeConfig config) : config_(std::move(config)) {
    server_.set_payload_max_length(config_.payload_cap_bytes);
    server_.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });
    server_.Post("/score", [this](const httplib::Request& req, httplib::Response& res) {
      Json body = Json::parse(req.body, nullptr, false);
      if (body.is_discarded()) {
        res.status = 400;
        res.set_content(Json{{"error", "invalid JSON body"}}.dump(), "application/json");
        return;
      }
      ScoreResponse out =
          handle_score_request(body, config_.default_task, config_.score_options);
      res.status = out.status;
      res.set_content(out.body.dump(), "application/json");
    });
  }

  // Blocks until stop(). Returns false when the port cannot be bound.
  bool listen() { return server_.listen(config_.host, config_.port); }

  // Binds an ephemeral port and serves from a background thread; returns the
  // bound port. Test and embedding hook.
  int start_async() {
    int port = server_.bind_to_any_port(config_.host);
    if (port < 0) throw Error("cannot bind reward server");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port;
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  ~RewardServer() { stop(); }

 private:
  ServeConfig config_;
  httplib::Server server_;
  std::thread thread_;
};

}  // namespace ocrforge
