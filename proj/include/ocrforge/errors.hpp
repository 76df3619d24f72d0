#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocrforge {

// Base class for all toolkit errors. Scoring functions are total and never
// throw; errors are reserved for invalid ground truth, invalid configuration,
// and infeasible results.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// No <table> element in an input that must contain one (ground truth side).
class NoTableFoundError : public Error {
 public:
  explicit NoTableFoundError(const std::string& what = "no <table> element found")
      : Error(what) {}
};

// Aggregate statistics requested over an empty batch.
class EmptyBatchError : public Error {
 public:
  explicit EmptyBatchError(const std::string& what = "empty batch") : Error(what) {}
};

// Invalid configuration; message carries field-level detail.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Split assignment could not produce a non-empty test set.
class InfeasibleSplitError : public Error {
 public:
  explicit InfeasibleSplitError(const std::string& what) : Error(what) {}
};

// Prediction ids with no matching reference entry.
class MissingReferenceError : public Error {
 public:
  MissingReferenceError(const std::string& what, std::vector<std::string> ids)
      : Error(what), missing_ids(std::move(ids)) {}
  std::vector<std::string> missing_ids;
};

// JSONL line that failed to parse or failed schema validation.
class MalformedLineError : public Error {
 public:
  MalformedLineError(const std::string& what, std::size_t line_number)
      : Error(what), line(line_number) {}
  std::size_t line;
};

// Chat endpoint failure that survived the retry budget.
class ClientError : public Error {
 public:
  explicit ClientError(const std::string& what) : Error(what) {}
};

// Tool adapter failure.
class ToolError : public Error {
 public:
  ToolError(const std::string& what, std::string tool)
      : Error(what), tool_name(std::move(tool)) {}
  std::string tool_name;
};

}  // namespace ocrforge
