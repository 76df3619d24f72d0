#pragma once

namespace ocrforge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ocrforge
