#pragma once

namespace tracekit {

inline constexpr const char* kVersion = "0.1.0";

/// Version stamp carried by every JSON document the toolkit emits.
inline constexpr int kSchemaVersion = 1;

}  // namespace tracekit
