#pragma once

namespace fermijump {

inline constexpr const char* kToolName = "fermijump";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

} // namespace fermijump
