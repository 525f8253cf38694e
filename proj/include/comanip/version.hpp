#pragma once

namespace comanip {

inline constexpr const char* kToolName = "comanip";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace comanip
