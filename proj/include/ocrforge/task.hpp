#pragma once

#include <string>
#include <string_view>

#include "ocrforge/errors.hpp"

namespace ocrforge {

enum class TaskKind { Seal, Table, Formula };

inline const char* to_string(TaskKind task) {
  switch (task) {
    case TaskKind::Seal: return "seal";
    case TaskKind::Table: return "table";
    case TaskKind::Formula: return "formula";
  }
  return "?";
}

inline TaskKind task_from_string(std::string_view name) {
  if (name == "seal") return TaskKind::Seal;
  if (name == "table") return TaskKind::Table;
  if (name == "formula") return TaskKind::Formula;
  throw ConfigError("unknown task: '" + std::string(name) + "' (expected seal|table|formula)");
}

}  // namespace ocrforge
