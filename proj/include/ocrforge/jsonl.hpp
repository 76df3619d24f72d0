#pragma once

#include <fstream>
#include <functional>
#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ocrforge/errors.hpp"

namespace ocrforge {

// Insertion-ordered JSON keeps every serialized artifact byte-deterministic.
using Json = nlohmann::ordered_json;

// Calls `fn(value, line_number)` for every non-empty line; 1-based numbering.
inline void for_each_jsonl(std::istream& in, const std::function<void(Json, std::size_t)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Json value = Json::parse(line, nullptr, false);
    if (value.is_discarded()) {
      throw MalformedLineError("line " + std::to_string(line_no) + ": invalid JSON", line_no);
    }
    fn(std::move(value), line_no);
  }
}

inline std::vector<Json> read_jsonl_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open input file: " + path);
  std::vector<Json> out;
  for_each_jsonl(in, [&](Json value, std::size_t) { out.push_back(std::move(value)); });
  return out;
}

class JsonlWriter {
 public:
  explicit JsonlWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw ConfigError("cannot open output file: " + path);
  }

  void write(const Json& value) {
    out_ << value.dump() << '\n';
    if (!out_) throw Error("write failed: " + path_);
  }

  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
  std::string path_;
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

}  // namespace ocrforge
