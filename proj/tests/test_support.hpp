#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testsupport {

// Self-cleaning unique temp directory.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& label) {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("ocrforge_" + label + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::string file(const std::string& name) const { return (path / name).string(); }

  std::string subdir(const std::string& name) const {
    std::filesystem::path p = path / name;
    std::filesystem::create_directories(p);
    return p.string();
  }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string source_dir() { return OCRFORGE_SOURCE_DIR; }

}  // namespace testsupport
