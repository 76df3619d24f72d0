#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>

#include <httplib.h>

#include "ocrforge/errors.hpp"
#include "ocrforge/jsonl.hpp"
#include "ocrforge/task.hpp"

namespace ocrforge {

// An expert recognizer whose output is embedded in the chain's tool section.
// Adapters are total in the sense that failures surface as ToolError, never
// as crashes; names must be unique within a pipeline run.
class ToolAdapter {
 public:
  virtual ~ToolAdapter() = default;
  virtual const std::string& name() const = 0;
  virtual std::string recognize(TaskKind task, const std::string& image_ref) = 0;
};

// Fixture-backed adapter: output for image "dir/x.png" is read from
// <fixture_dir>/x.<tool_name>.txt.
class CannedToolAdapter : public ToolAdapter {
 public:
  CannedToolAdapter(std::string name, std::string fixture_dir)
      : name_(std::move(name)), dir_(std::move(fixture_dir)) {}

  const std::string& name() const override { return name_; }

  std::string recognize(TaskKind, const std::string& image_ref) override {
    std::string stem = std::filesystem::path(image_ref).stem().string();
    std::filesystem::path path = std::filesystem::path(dir_) / (stem + "." + name_ + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ToolError("missing tool fixture: " + path.string(), name_);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  }

 private:
  std::string name_;
  std::string dir_;
};

// Remote expert model behind a minimal JSON contract:
//   POST <path>  {"task": "...", "image_ref": "..."}  ->  {"text": "..."}
class HttpToolAdapter : public ToolAdapter {
 public:
  HttpToolAdapter(std::string name, std::string base_url, std::string path, int timeout_s = 60)
      : name_(std::move(name)),
        base_url_(std::move(base_url)),
        path_(std::move(path)),
        timeout_s_(timeout_s) {
    if (base_url_.empty()) throw ConfigError("tool '" + name_ + "': base_url required");
    if (path_.empty()) path_ = "/recognize";
  }

  const std::string& name() const override { return name_; }

  std::string recognize(TaskKind task, const std::string& image_ref) override {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_s_, 0);
    client.set_read_timeout(timeout_s_, 0);
    Json payload{{"task", to_string(task)}, {"image_ref", image_ref}};
    auto res = client.Post(path_, payload.dump(), "application/json");
    if (!res) {
      throw ToolError("tool endpoint transport error: " + httplib::to_string(res.error()), name_);
    }
    if (res->status != 200) {
      throw ToolError("tool endpoint returned status " + std::to_string(res->status), name_);
    }
    Json j = Json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("text") || !j["text"].is_string()) {
      throw ToolError("tool endpoint returned malformed body", name_);
    }
    return j["text"].get<std::string>();
  }

 private:
  std::string name_;
  std::string base_url_;
  std::string path_;
  int timeout_s_;
};

}  // namespace ocrforge
