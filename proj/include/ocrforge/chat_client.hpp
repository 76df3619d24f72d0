#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "ocrforge/errors.hpp"
#include "ocrforge/jsonl.hpp"

namespace ocrforge {

struct ChatMessage {
  std::string role;
  std::string text;
  std::string image_ref;  // empty = text-only message
};

// One model call. The pipeline owns conversation history; sample_id and turn
// exist so fixture-backed clients can route deterministically.
struct ChatRequest {
  std::vector<ChatMessage> messages;
  std::string sample_id;
  int turn = 0;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Returns the assistant message text; throws ClientError after the retry
  // budget is exhausted.
  virtual std::string send(const ChatRequest& request) = 0;
};

struct HttpChatConfig {
  std::string base_url;                           // e.g. http://host:port
  std::string path = "/v1/chat/completions";
  std::string model;
  double temperature = 0.0;
  int timeout_s = 60;
  int retries = 3;          // attempts after the first
  int backoff_ms = 500;     // doubled per retry
  std::string api_key_env = "OCRFORGE_API_KEY";
  std::string image_mode = "uri";  // "uri" | "base64"
};

namespace detail {

inline std::string base64_encode(const std::string& data) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 2 < data.size()) {
    unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                 (static_cast<unsigned char>(data[i + 1]) << 8) |
                 static_cast<unsigned char>(data[i + 2]);
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back(kAlphabet[v & 63]);
    i += 3;
  }
  if (i + 1 == data.size()) {
    unsigned v = static_cast<unsigned char>(data[i]) << 16;
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out += "==";
  } else if (i + 2 == data.size()) {
    unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                 (static_cast<unsigned char>(data[i + 1]) << 8);
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

inline std::string guess_image_mime(const std::string& path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".png")) return "image/png";
  if (ends_with(".gif")) return "image/gif";
  if (ends_with(".webp")) return "image/webp";
  return "image/jpeg";
}

}  // namespace detail

// Chat-completions-style JSON-over-HTTP client with a bounded retry budget
// and exponential backoff. Stateless across calls; safe to share between
// worker threads.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(HttpChatConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) throw ConfigError("client.base_url: required for http mode");
  }

  std::string send(const ChatRequest& request) override {
    Json payload = build_payload(request);
    std::string body = payload.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(static_cast<long>(config_.backoff_ms) << (attempt - 1)));
      }
      httplib::Client client(config_.base_url);
      client.set_connection_timeout(config_.timeout_s, 0);
      client.set_read_timeout(config_.timeout_s, 0);
      httplib::Headers headers;
      const char* key = std::getenv(config_.api_key_env.c_str());
      if (key != nullptr && *key != '\0') {
        headers.emplace("Authorization", std::string("Bearer ") + key);
      }
      auto res = client.Post(config_.path, headers, body, "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "status " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw ClientError("chat endpoint returned status " + std::to_string(res->status) + ": " +
                          res->body.substr(0, 256));
      }
      return extract_content(res->body);
    }
    throw ClientError("chat endpoint failed after " + std::to_string(config_.retries + 1) +
                      " attempts: " + last_error);
  }

 private:
  Json build_payload(const ChatRequest& request) const {
    Json messages = Json::array();
    for (const ChatMessage& m : request.messages) {
      if (m.image_ref.empty()) {
        messages.push_back({{"role", m.role}, {"content", m.text}});
        continue;
      }
      Json parts = Json::array();
      std::string url = m.image_ref;
      if (config_.image_mode == "base64") {
        url = "data:" + detail::guess_image_mime(m.image_ref) + ";base64," +
              detail::base64_encode(read_text_file(m.image_ref));
      }
      parts.push_back({{"type", "image_url"}, {"image_url", {{"url", url}}}});
      parts.push_back({{"type", "text"}, {"text", m.text}});
      messages.push_back({{"role", m.role}, {"content", parts}});
    }
    return Json{{"model", config_.model},
                {"temperature", config_.temperature},
                {"messages", messages}};
  }

  static std::string extract_content(const std::string& body) {
    Json j = Json::parse(body, nullptr, false);
    if (j.is_discarded()) throw ClientError("chat endpoint returned invalid JSON");
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
      throw ClientError("chat response has no choices");
    }
    const Json& message = j["choices"][0].contains("message") ? j["choices"][0]["message"]
                                                              : Json(nullptr);
    if (!message.is_object() || !message.contains("content")) {
      throw ClientError("chat response has no message content");
    }
    const Json& content = message["content"];
    if (content.is_string()) return content.get<std::string>();
    if (content.is_array()) {
      std::string text;
      for (const Json& part : content) {
        if (part.is_object() && part.value("type", "") == "text") {
          text += part.value("text", "");
        }
      }
      return text;
    }
    throw ClientError("unsupported chat content type");
  }

  HttpChatConfig config_;
};

// Fixture-backed client: responses live in a directory keyed by sample id and
// turn (<id>.turn<k>.txt). Never retries; repeated runs are byte-identical.
class CannedChatClient : public ChatClient {
 public:
  explicit CannedChatClient(std::string fixture_dir) : dir_(std::move(fixture_dir)) {}

  std::string send(const ChatRequest& request) override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    std::filesystem::path path =
        std::filesystem::path(dir_) / (request.sample_id + ".turn" + std::to_string(request.turn) +
                                       ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ClientError("missing fixture: " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  }

  std::size_t calls() const { return calls_.load(std::memory_order_relaxed); }

 private:
  std::string dir_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace ocrforge
